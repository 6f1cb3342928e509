#include "maxmart/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace maxmart {

std::string report_to_json(const VerificationReport& r) {
    nlohmann::json j;
    j["identity_name"] = r.identity_name;
    j["n"] = r.n;
    j["statistic"] = r.statistic;
    j["threshold"] = r.threshold;
    j["pass"] = r.pass;
    j["unresolved_fraction"] = r.unresolved_fraction;
    j["seed"] = r.seed;
    j["runtime_ms"] = r.runtime_ms;
    j["detail"] = r.detail;
    return j.dump(2);
}

void parallel_for_paths(std::uint64_t n, unsigned workers,
                        const std::function<void(std::uint64_t, std::uint64_t)>& chunk_fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(n, 1)));
    if (workers <= 1 || n < 2) {
        chunk_fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t per = n / workers, rem = n % workers;
    std::uint64_t lo = 0;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t hi = lo + per + (w < rem ? 1 : 0);
        pool.emplace_back([&chunk_fn, lo, hi] { chunk_fn(lo, hi); });
        lo = hi;
    }
    for (auto& t : pool) t.join();
}

double mean_of(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
}

double sem_of(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    const double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / double(n - 1) / double(n));
}

SurvivalEstimate estimate_survival(std::span<const double> samples, double a) {
    const std::size_t n = samples.size();
    if (n < 100) throw std::invalid_argument("estimate_survival: need n >= 100");
    std::size_t cnt = 0;
    for (double s : samples)
        if (s > a) ++cnt;
    const double p = double(cnt) / double(n);
    return SurvivalEstimate{p, 3.0 * std::sqrt(p * (1.0 - p) / double(n))};
}

double ks_threshold(std::size_t n) { return 1.358 / std::sqrt(double(n)); }

KsResult ks_test(std::vector<double> samples, RefDist ref, double lambda) {
    const std::size_t n = samples.size();
    if (n < 1000) throw std::invalid_argument("ks_test: need n >= 1000");
    std::sort(samples.begin(), samples.end());
    auto cdf = [&](double x) -> double {
        switch (ref) {
            case RefDist::Uniform01: return std::clamp(x, 0.0, 1.0);
            case RefDist::Exponential: return x <= 0.0 ? 0.0 : -std::expm1(-lambda * x);
            case RefDist::ReciprocalUniform: return x <= 1.0 ? 0.0 : 1.0 - 1.0 / x;
        }
        return 0.0;
    };
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::max(double(i + 1) / double(n) - f, f - double(i) / double(n)));
    }
    return KsResult{d, d <= ks_threshold(n)};
}

MeanZeroResult martingale_residual_test(const std::vector<std::vector<double>>& per_checkpoint) {
    double stat = 0.0;
    for (const auto& xs : per_checkpoint) {
        const double sem = sem_of(xs);
        const double m = std::abs(mean_of(xs));
        stat = std::max(stat, sem > 0.0 ? m / (3.0 * sem) : (m > 0.0 ? 1e9 : 0.0));
    }
    return MeanZeroResult{stat, stat <= 1.0};
}

QvResult quadratic_variation_test(std::span<const double> qv, std::span<const double> target) {
    if (qv.size() != target.size() || qv.empty())
        throw std::invalid_argument("quadratic_variation_test: size mismatch");
    const double mq = mean_of(qv), mt = mean_of(target);
    if (mt <= 0.0) throw std::invalid_argument("quadratic_variation_test: degenerate target");
    const double stat = std::abs(mq - mt) / (0.05 * mt);
    return QvResult{stat, stat <= 1.0};
}

namespace {

std::vector<double> ranks_of(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[idx[j + 1]] == xs[idx[i]]) ++j;
        const double avg = 0.5 * (double(i) + double(j)) + 1.0;  // average rank for ties
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

IndependenceResult independence_test(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw std::invalid_argument("independence_test: length mismatch");
    const std::size_t n = u.size();
    if (n < 10) throw std::invalid_argument("independence_test: too few samples");
    const auto ru = ranks_of(u), rv = ranks_of(v);
    const double mu = mean_of(ru), mv = mean_of(rv);
    double suv = 0.0, su = 0.0, sv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = ru[i] - mu, b = rv[i] - mv;
        suv += a * b;
        su += a * a;
        sv += b * b;
    }
    const double rho = (su > 0.0 && sv > 0.0) ? suv / std::sqrt(su * sv) : 0.0;
    return IndependenceResult{rho, std::abs(rho) <= 3.0 / std::sqrt(double(n))};
}

NestedResult nested_deviation_test(std::span<const double> deviations,
                                   std::span<const double> sems) {
    if (deviations.size() != sems.size() || deviations.empty())
        throw std::invalid_argument("nested_deviation_test: size mismatch");
    const double n = double(deviations.size());
    double mad = 0.0, e0 = 0.0, var_mad = 0.0;
    constexpr double kMeanAbs = 0.7978845608028654;   // E|Z| for standard normal
    constexpr double kVarAbs = 1.0 - kMeanAbs * kMeanAbs;
    for (std::size_t i = 0; i < deviations.size(); ++i) {
        mad += std::abs(deviations[i]);
        e0 += sems[i] * kMeanAbs;
        var_mad += sems[i] * sems[i] * kVarAbs;
    }
    mad /= n;
    e0 /= n;
    const double sd_mad = std::sqrt(var_mad) / n;
    const double stat = mad / (e0 + 3.0 * sd_mad);
    return NestedResult{stat, stat <= 1.0};
}

TwoMeanResult two_mean_equality_test(std::span<const double> lhs, std::span<const double> rhs) {
    const double diff = std::abs(mean_of(lhs) - mean_of(rhs));
    const double sem = std::sqrt(sem_of(lhs) * sem_of(lhs) + sem_of(rhs) * sem_of(rhs));
    const double stat = sem > 0.0 ? diff / (3.0 * sem) : (diff > 0.0 ? 1e9 : 0.0);
    return TwoMeanResult{stat, stat <= 1.0};
}

DriftBinner::DriftBinner(double lo, double hi, std::size_t n_bins, double step)
    : lo_(lo), hi_(hi), width_((hi - lo) / double(n_bins)), step_(step),
      n_(n_bins, 0), sx_(n_bins, 0.0), sdx_(n_bins, 0.0), sdx2_(n_bins, 0.0) {
    if (!(hi > lo) || n_bins == 0) throw std::invalid_argument("DriftBinner: bad range");
}

void DriftBinner::add(double x, double dx) {
    if (x < lo_ || x >= hi_) return;
    const std::size_t k = static_cast<std::size_t>((x - lo_) / width_);
    ++n_[k];
    sx_[k] += x;
    sdx_[k] += dx;
    sdx2_[k] += dx * dx;
}

void DriftBinner::merge(const DriftBinner& o) {
    for (std::size_t k = 0; k < n_.size(); ++k) {
        n_[k] += o.n_[k];
        sx_[k] += o.sx_[k];
        sdx_[k] += o.sdx_[k];
        sdx2_[k] += o.sdx2_[k];
    }
}

DriftRegressionResult DriftBinner::evaluate(const std::function<double(double)>& theoretical_drift,
                                            double bias_allowance_coeff,
                                            std::uint64_t min_count) const {
    DriftRegressionResult out;
    for (std::size_t k = 0; k < n_.size(); ++k) {
        if (n_[k] < min_count) {
            ++out.skipped;
            continue;
        }
        DriftBin b;
        b.count = n_[k];
        const double m = double(n_[k]);
        b.x_mean = sx_[k] / m;
        const double mdx = sdx_[k] / m;
        b.drift_hat = mdx / step_;
        const double var_dx = std::max(0.0, sdx2_[k] / m - mdx * mdx);
        b.stderr3 = 3.0 * std::sqrt(var_dx / m) / step_;
        b.theoretical = theoretical_drift(b.x_mean);
        b.allowance =
            bias_allowance_coeff * step_ * (1.0 + std::abs(b.theoretical) / (b.x_mean * b.x_mean));
        const double dev = std::abs(b.drift_hat - b.theoretical);
        b.pass = dev <= b.stderr3 + b.allowance;
        out.statistic = std::max(out.statistic, dev / (b.stderr3 + b.allowance));
        out.bins.push_back(b);
    }
    out.pass = !out.bins.empty() && out.statistic <= 1.0;
    return out;
}

}  // namespace maxmart
