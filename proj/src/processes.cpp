#include "maxmart/processes.hpp"

#include <cmath>
#include <stdexcept>

#include "maxmart/rng.hpp"

namespace maxmart {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = 1e-8 * std::max(1.0, std::abs(whole));
    const double r = simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
    if (!std::isfinite(r)) throw std::domain_error("ScaleSpec: quadrature failed");
    return r;
}

}  // namespace

ScaleSpec ScaleSpec::zero_drift() { return ScaleSpec{}; }

ScaleSpec ScaleSpec::constant_drift(double b) {
    ScaleSpec s;
    s.kind_ = Kind::Constant;
    s.b_ = b;
    return s;
}

ScaleSpec ScaleSpec::generic(std::function<double(double)> b) {
    ScaleSpec s;
    s.kind_ = Kind::Generic;
    s.fn_ = std::move(b);
    return s;
}

double ScaleSpec::drift(double x) const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return b_;
        case Kind::Generic: return fn_(x);
    }
    return 0.0;
}

double ScaleSpec::b_hat(double y) const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return b_ * y;
        case Kind::Generic: return integrate(fn_, 0.0, y);
    }
    return 0.0;
}

double ScaleSpec::scale(double z) const {
    switch (kind_) {
        case Kind::Zero: return z;
        case Kind::Constant:
            if (b_ == 0.0) return z;
            return -std::expm1(-2.0 * b_ * z) / (2.0 * b_);
        case Kind::Generic: {
            auto g = [this](double y) { return std::exp(-2.0 * b_hat(y)); };
            return integrate(g, 0.0, z);
        }
    }
    return z;
}

double ScaleSpec::scale_derivative(double z) const { return std::exp(-2.0 * b_hat(z)); }

Path gen_brownian_stopped(double x0, const TimeGrid& grid, std::uint64_t seed) {
    if (x0 <= 0.0) throw std::invalid_argument("gen_brownian_stopped: x0 must be > 0");
    NormalSampler ns(seed);
    const double sq = std::sqrt(grid.step);
    std::vector<double> v(grid.n_points);
    v[0] = x0;
    std::optional<std::size_t> stopped;
    double b = x0;
    for (std::size_t i = 1; i < grid.n_points; ++i) {
        if (stopped) {
            v[i] = 0.0;
            continue;
        }
        b += sq * ns.next();
        if (b <= 0.0) {
            b = 0.0;
            stopped = i;
        }
        v[i] = b;
    }
    return Path(grid, std::move(v), stopped);
}

GbmPaths gen_gbm_martingale(const GbmSpec& spec, const TimeGrid& grid, std::uint64_t seed) {
    if (spec.nu <= 0.0) throw std::invalid_argument("gen_gbm_martingale: nu must be > 0");
    NormalSampler ns(seed);
    const double sq = std::sqrt(grid.step);
    std::vector<double> n(grid.n_points), bpath(grid.n_points);
    double b = 0.0;
    bpath[0] = 0.0;
    n[0] = 1.0;
    for (std::size_t i = 1; i < grid.n_points; ++i) {
        b += sq * ns.next();
        bpath[i] = b;
        n[i] = std::exp(2.0 * spec.nu * b - 2.0 * spec.nu * spec.nu * grid.time_at(i));
    }
    return GbmPaths{Path(grid, std::move(n)), Path(grid, std::move(bpath))};
}

Path gen_bessel3(double x0, const TimeGrid& grid, std::uint64_t seed) {
    if (x0 < 0.0) throw std::invalid_argument("gen_bessel3: x0 must be >= 0");
    NormalSampler ns(seed);
    const double dt = grid.step;
    const double sq = std::sqrt(dt);
    const double guard = sq;  // drift denominator floor
    std::vector<double> v(grid.n_points);
    double r = x0;
    v[0] = r;
    for (std::size_t i = 1; i < grid.n_points; ++i) {
        r += dt / std::max(r, guard) + sq * ns.next();
        if (r < 0.0) r = -r;
        v[i] = r;
    }
    return Path(grid, std::move(v));
}

DiffusionPaths gen_diffusion(const ScaleSpec& scale, double x0, const TimeGrid& grid,
                             std::uint64_t seed) {
    if (x0 <= 0.0) throw std::invalid_argument("gen_diffusion: x0 must be > 0");
    const double sx0 = scale.scale(x0);
    if (sx0 == 0.0) throw std::domain_error("gen_diffusion: s(x0) must be nonzero");
    NormalSampler ns(seed);
    const double dt = grid.step;
    const double sq = std::sqrt(dt);
    std::vector<double> xv(grid.n_points), nv(grid.n_points);
    double x = x0;
    xv[0] = x;
    nv[0] = 1.0;
    std::optional<std::size_t> stopped;
    for (std::size_t i = 1; i < grid.n_points; ++i) {
        if (stopped) {
            xv[i] = 0.0;
            nv[i] = 0.0;
            continue;
        }
        x += scale.drift(x) * dt + sq * ns.next();
        if (x <= 0.0) {
            x = 0.0;
            stopped = i;
        }
        xv[i] = x;
        nv[i] = scale.scale(x) / sx0;
    }
    return DiffusionPaths{Path(grid, std::move(xv), stopped), Path(grid, std::move(nv), stopped)};
}

TransientPaths gen_transient_diffusion_bessel(double x0, const TimeGrid& grid,
                                              std::uint64_t seed) {
    if (x0 <= 0.0)
        throw std::invalid_argument("gen_transient_diffusion_bessel: x0 must be > 0");
    Path r = gen_bessel3(x0, grid, seed);
    std::vector<double> n(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) n[i] = x0 / r[i];
    return TransientPaths{std::move(r), Path(grid, std::move(n))};
}

PoissonPaths gen_poisson_exp_martingale(const PoissonMartingaleSpec& spec, const TimeGrid& grid,
                                        std::uint64_t seed) {
    if (spec.rate_c <= 0.0)
        throw std::invalid_argument("gen_poisson_exp_martingale: rate must be > 0");
    Xoshiro256pp rng(seed);
    const double horizon = grid.horizon();
    std::vector<double> jumps;
    double t = 0.0;
    for (;;) {
        t += -std::log(rng.next_double_pos()) / spec.rate_c;
        if (t > horizon) break;
        jumps.push_back(t);
    }
    std::vector<std::size_t> jump_idx;
    jump_idx.reserve(jumps.size());
    std::vector<double> e(grid.n_points), x(grid.n_points);
    std::size_t j = 0;
    double sum_f = 0.0;
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double ti = grid.time_at(i);
        while (j < jumps.size() && jumps[j] <= ti) {
            sum_f += spec.f.value(jumps[j]);
            jump_idx.push_back(i);
            ++j;
        }
        x[i] = static_cast<double>(j);
        e[i] = std::exp(-sum_f + spec.rate_c * spec.f.exp_compensator(ti));
    }
    return PoissonPaths{Path(grid, std::move(e)), Path(grid, std::move(x)), std::move(jumps),
                        std::move(jump_idx)};
}

}  // namespace maxmart
