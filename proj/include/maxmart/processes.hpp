#ifndef MAXMART_PROCESSES_HPP_
#define MAXMART_PROCESSES_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "maxmart/path.hpp"
#include "maxmart/test_function.hpp"

namespace maxmart {

// Scale function machinery for one-dimensional diffusions
// dX = b(X) dt + dB:  s(z) = int_0^z exp(-2 bhat(y)) dy, bhat(y) = int_0^y b.
// Constant drift evaluates in closed form; anything else goes through
// adaptive quadrature (rel tol 1e-8). Well-posedness of a user-supplied b is
// the caller's responsibility.
class ScaleSpec {
  public:
    static ScaleSpec zero_drift();
    static ScaleSpec constant_drift(double b);
    static ScaleSpec generic(std::function<double(double)> b);

    double drift(double x) const;
    double b_hat(double y) const;
    double scale(double z) const;
    double scale_derivative(double z) const;

  private:
    enum class Kind { Zero, Constant, Generic } kind_ = Kind::Zero;
    double b_ = 0.0;
    std::function<double(double)> fn_;
};

struct GbmSpec {
    double nu = 0.5;  // transience requires nu > 0
};

struct PoissonMartingaleSpec {
    double rate_c = 1.0;
    TestFunction f = TestFunction::constant(1.0);
};

// Brownian motion from x0 > 0, absorbed at the first grid index with B <= 0
// (value clamped to 0). One normal draw per live step.
Path gen_brownian_stopped(double x0, const TimeGrid& grid, std::uint64_t seed);

struct GbmPaths {
    Path N;
    Path driver_B;
};
// N_t = exp(2 nu B_t - 2 nu^2 t); the path is not absorbed, resolution is a
// batch-level concern (N/S below eps_stop).
GbmPaths gen_gbm_martingale(const GbmSpec& spec, const TimeGrid& grid, std::uint64_t seed);

// Euler scheme for the three-dimensional Bessel SDE dR = dt/R + d(beta) with
// positivity guard: drift uses max(R, sqrt(step)), negative proposals reflect.
Path gen_bessel3(double x0, const TimeGrid& grid, std::uint64_t seed);

struct DiffusionPaths {
    Path X;
    Path N;
};
// dX = b(X) dt + dB from x0 > 0, absorbed at 0; N = s(X_{t ^ T0}) / s(x0).
DiffusionPaths gen_diffusion(const ScaleSpec& scale, double x0, const TimeGrid& grid,
                             std::uint64_t seed);

struct TransientPaths {
    Path R;
    Path N;
};
// R = Bessel(3); N = x0 / R, the normalized scale martingale with s(z) = -1/z.
TransientPaths gen_transient_diffusion_bessel(double x0, const TimeGrid& grid,
                                              std::uint64_t seed);

struct PoissonPaths {
    Path E;
    Path X;
    std::vector<double> jump_times;          // exact exponential arrivals
    std::vector<std::size_t> jump_indices;   // first grid index at/after each jump
};
// E_t = exp(-int f dX + c int (1 - e^{-f})): exact jump times sampled first,
// then both processes are read off on the grid. E jumps down at jumps (f >= 0).
PoissonPaths gen_poisson_exp_martingale(const PoissonMartingaleSpec& spec, const TimeGrid& grid,
                                        std::uint64_t seed);

}  // namespace maxmart

#endif  // MAXMART_PROCESSES_HPP_
