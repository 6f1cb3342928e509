#ifndef MAXMART_MC_ENGINE_HPP_
#define MAXMART_MC_ENGINE_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace maxmart {

struct VerificationReport {
    std::string identity_name;
    std::uint64_t n = 0;
    double statistic = 0.0;   // pass <=> statistic <= threshold
    double threshold = 1.0;
    bool pass = false;
    double unresolved_fraction = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t runtime_ms = 0;
    std::string detail;
};

std::string report_to_json(const VerificationReport& r);

// Splits [0, n) into contiguous chunks and runs them on `workers` threads
// (0 = hardware concurrency). Chunks write to disjoint per-path slots, so the
// result is byte-identical for any worker count.
void parallel_for_paths(std::uint64_t n, unsigned workers,
                        const std::function<void(std::uint64_t, std::uint64_t)>& chunk_fn);

template <class T, class F>
std::vector<T> run_scalar_batch(std::uint64_t n, unsigned workers, F&& per_path) {
    std::vector<T> out(n);
    parallel_for_paths(n, workers, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) out[i] = per_path(i);
    });
    return out;
}

struct SurvivalEstimate {
    double p_hat = 0.0;
    double ci_halfwidth = 0.0;  // 3 * sqrt(p(1-p)/n)
};
SurvivalEstimate estimate_survival(std::span<const double> samples, double a);

enum class RefDist { Uniform01, Exponential, ReciprocalUniform };

struct KsResult {
    double d = 0.0;
    bool pass = false;  // d <= 1.358 / sqrt(n), the alpha = 0.05 asymptotic point
};
// One-sample Kolmogorov-Smirnov; requires n >= 1000.
KsResult ks_test(std::vector<double> samples, RefDist ref, double lambda = 1.0);
double ks_threshold(std::size_t n);

struct MeanZeroResult {
    double statistic = 0.0;  // max_t |mean| / (3 sem)
    bool pass = false;
};
MeanZeroResult martingale_residual_test(const std::vector<std::vector<double>>& per_checkpoint);

struct QvResult {
    double statistic = 0.0;  // |mean(qv) - mean(target)| / (0.05 mean(target))
    bool pass = false;
};
QvResult quadratic_variation_test(std::span<const double> qv, std::span<const double> target);

struct IndependenceResult {
    double rho_s = 0.0;  // Spearman rank correlation; necessary, not sufficient
    bool pass = false;   // |rho_s| <= 3/sqrt(n)
};
IndependenceResult independence_test(std::span<const double> u, std::span<const double> v);

struct NestedResult {
    double statistic = 0.0;  // MAD / (E0[MAD] + 3 sd(MAD))
    bool pass = false;
};
// deviations_i = branch mean minus the closed-form conditional value;
// sems_i = the per-branch standard error of that mean.
NestedResult nested_deviation_test(std::span<const double> deviations,
                                   std::span<const double> sems);

struct TwoMeanResult {
    double statistic = 0.0;  // |mean_l - mean_r| / (3 sqrt(sem_l^2 + sem_r^2))
    bool pass = false;
};
TwoMeanResult two_mean_equality_test(std::span<const double> lhs, std::span<const double> rhs);

struct DriftBin {
    double x_mean = 0.0;
    double drift_hat = 0.0;
    double stderr3 = 0.0;     // 3 * standard error of drift_hat
    double theoretical = 0.0;
    double allowance = 0.0;   // O(step) bias allowance
    std::uint64_t count = 0;
    bool pass = false;
};

struct DriftRegressionResult {
    std::vector<DriftBin> bins;
    std::size_t skipped = 0;  // under-populated bins
    double statistic = 0.0;   // max over bins of |drift_hat - th| / (3 se + allowance)
    bool pass = false;
};

// Accumulator for binned conditional-drift estimates E[dX | X in bin] / step.
class DriftBinner {
  public:
    DriftBinner(double lo, double hi, std::size_t n_bins, double step);
    void add(double x, double dx);
    void merge(const DriftBinner& other);
    DriftRegressionResult evaluate(const std::function<double(double)>& theoretical_drift,
                                   double bias_allowance_coeff,
                                   std::uint64_t min_count = 500) const;

  private:
    double lo_, hi_, width_, step_;
    std::vector<std::uint64_t> n_;
    std::vector<double> sx_, sdx_, sdx2_;
};

double mean_of(std::span<const double> xs);
double sem_of(std::span<const double> xs);  // sd / sqrt(n)

}  // namespace maxmart

#endif  // MAXMART_MC_ENGINE_HPP_
