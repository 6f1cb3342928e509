#include "maxmart/law_samplers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxmart {
namespace zig {

Tables build_tables() {
    // 256-layer Marsaglia-Tsang construction, 56-bit mantissa variant.
    Tables t{};
    constexpr double m = 36028797018963968.0;  // 2^55
    double dn = 3.6541528853610088;
    double tn = dn;
    const double vn = 4.92867323399e-3;

    const double q = vn / std::exp(-0.5 * dn * dn);
    t.k[0] = static_cast<std::uint64_t>((dn / q) * m);
    t.k[1] = 0;
    t.w[0] = q / m;
    t.w[255] = dn / m;
    t.f[0] = 1.0;
    t.f[255] = std::exp(-0.5 * dn * dn);
    for (int i = 254; i >= 1; --i) {
        dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
        t.k[i + 1] = static_cast<std::uint64_t>((dn / tn) * m);
        tn = dn;
        t.f[i] = std::exp(-0.5 * dn * dn);
        t.w[i] = dn / m;
    }
    return t;
}

}  // namespace zig

namespace {

// crossing probabilities below exp(-40) are skipped without consuming draws
constexpr double kSkip = 20.0;

// max / min of a Brownian bridge between (v0, v1) over a step of length h
inline double bridge_max(double v0, double v1, double h, double u) {
    const double d = v1 - v0;
    return 0.5 * (v0 + v1 + std::sqrt(d * d - 2.0 * h * std::log(u)));
}

inline double bridge_min(double v0, double v1, double h, double u) {
    const double d = v1 - v0;
    return 0.5 * (v0 + v1 - std::sqrt(d * d - 2.0 * h * std::log(u)));
}

struct StoppedBmEngine {
    NormalSampler ns;
    const StoppedBmOptions& o;
    const double dt, sq, band;

    // leg coordinates; original value = scale * leg value
    double b, sref, scale = 1.0;
    bool absorbed = false;

    // ratio infimum bookkeeping, snapshotted at records (original units for M)
    double r = 1.0, r_g = 1.0;
    double m_rho = 1.0, m_rho_g = 1.0, m_at_g = 1.0;
    bool frozen = false;

    // grid layer, original units
    double s_grid, sum1 = 0.0, sumk = 0.0, g_time, t_base;

    StoppedBmEngine(std::uint64_t seed, const StoppedBmOptions& opt)
        : ns(seed),
          o(opt),
          dt(opt.step),
          sq(std::sqrt(opt.step)),
          band(opt.refine_band * std::sqrt(opt.step)),
          b(opt.init_value),
          sref(opt.init_sup),
          s_grid(opt.init_sup),
          g_time(opt.init_time),
          t_base(opt.init_time) {
        if (!(opt.init_value > 0.0) || opt.init_value > opt.init_sup)
            throw std::invalid_argument("sample_stopped_bm_scalars: need 0 < init_value <= init_sup");
    }

    void refined_step(double v0, double v1, double h) {
        // min side: absorption at 0 and dips of the ratio below its running inf
        const double ystar = r * sref;
        double mn = 0.0;
        bool have_mn = false;
        if ((v0 - ystar) * (v1 - ystar) < kSkip * h) {
            mn = bridge_min(v0, v1, h, ns.next_double_pos());
            have_mn = true;
            if (mn <= 0.0) {
                absorbed = true;
                return;
            }
        }
        // max side: records of the supremum and the freeze of M at its level
        double mx = -1.0;
        if ((sref - v0) * (sref - v1) < kSkip * h) {
            mx = bridge_max(v0, v1, h, ns.next_double_pos());
            if (!frozen && scale * mx > o.m_level) frozen = true;
        }
        if (mx > sref) {
            // a record step: on a spike (endpoint back below the old sup) the
            // touch precedes the step's dip, so snapshot before applying it
            const bool rising = v1 > sref;
            if (!rising) {
                r_g = r;
                m_rho_g = m_rho;
            }
            if (have_mn && mn < ystar) apply_dip(mn);
            if (rising) {
                r_g = r;
                m_rho_g = m_rho;
            }
            m_at_g = frozen ? o.m_level : scale * mx;
            sref = mx;
        } else if (have_mn && mn < ystar) {
            apply_dip(mn);
        }
    }

    void apply_dip(double mn) {
        const double dip = mn / sref;
        if (dip < r) {
            r = dip;
            m_rho = frozen ? o.m_level : scale * mn;
        }
    }

    StoppedBmScalars run() {
        StoppedBmScalars out;
        const std::size_t steps = static_cast<std::size_t>(std::llround(o.leg_horizon / dt));
        int leg = 0;
        while (leg < o.max_legs && !absorbed) {
            ++leg;
            for (std::size_t i = 1; i <= steps; ++i) {
                const double nb = b + sq * ns.next();
                if (o.refine_ratio && sref - std::max(b, nb) < band) {
                    // resolve the step as bridge sub-steps near the running max,
                    // where the order of dip vs record inside one step matters
                    const int K = o.refine_factor;
                    const double hs = dt / K;
                    double v = b;
                    for (int k = 1; k <= K && !absorbed; ++k) {
                        const int rem = K - k;
                        double vn = nb;
                        if (rem > 0) {
                            const double mean = v + (nb - v) / double(rem + 1);
                            vn = mean + std::sqrt(hs * double(rem) / double(rem + 1)) * ns.next();
                        }
                        refined_step(v, vn, hs);
                        v = vn;
                    }
                } else {
                    refined_step(b, nb, dt);
                }
                if (absorbed) break;
                const double nb_orig = scale * nb;
                if (nb_orig > s_grid) {
                    const double t_end = t_base + scale * scale * (double(i) * dt);
                    const double ds = nb_orig - s_grid;
                    sum1 += ds / s_grid;
                    sumk += std::exp(-t_end) * ds / s_grid;
                    s_grid = nb_orig;
                    g_time = t_end;
                }
                b = nb;
            }
            if (!absorbed) {
                t_base += scale * scale * o.leg_horizon;
                scale *= b;
                sref /= b;
                b = 1.0;
            }
        }
        out.resolved = absorbed;
        out.s_inf = scale * sref;
        out.s_grid = s_grid;
        out.sum_ds_over_s = sum1;
        out.sum_kexp_ds_over_s = sumk;
        out.g_time = g_time;
        out.r_rho = r_g;
        out.m_rho = m_rho_g;
        out.m_at_g = m_at_g;
        out.legs = leg;
        return out;
    }
};

}  // namespace

StoppedBmScalars sample_stopped_bm_scalars(std::uint64_t seed, const StoppedBmOptions& opt) {
    StoppedBmEngine eng(seed, opt);
    return eng.run();
}

GbmLawScalars sample_gbm_sup(std::uint64_t seed, const GbmLawOptions& opt) {
    NormalSampler ns(seed);
    const double dt = opt.step;
    const double sq = std::sqrt(dt);
    const double horizon = opt.horizon > 0.0 ? opt.horizon : 40.0 / opt.nu;
    const double gap_needed = -std::log(opt.eps_stop) / (2.0 * opt.nu);
    const std::size_t steps = static_cast<std::size_t>(std::llround(horizon / dt));
    double w = 0.0, wsup = 0.0;
    for (std::size_t i = 1; i <= steps; ++i) {
        const double nw = w - opt.nu * dt + sq * ns.next();
        if ((wsup - w) * (wsup - nw) < kSkip * dt) {
            const double mx = bridge_max(w, nw, dt, ns.next_double_pos());
            if (mx > wsup) wsup = mx;
        }
        w = nw;
        if (wsup - w > gap_needed) return GbmLawScalars{true, wsup};
    }
    return GbmLawScalars{false, wsup};
}

BesselLawScalars sample_bessel3_min(std::uint64_t seed, const BesselLawOptions& opt) {
    NormalSampler ns(seed);
    const double dt = opt.step;
    const double sq = std::sqrt(dt);
    const std::size_t steps = static_cast<std::size_t>(std::llround(opt.leg_horizon / dt));
    double r = 1.0, c = 1.0, i_inf = 1.0;
    for (int leg = 0; leg < opt.max_legs; ++leg) {
        for (std::size_t i = 1; i <= steps; ++i) {
            double nr = r + dt / std::max(r, sq) + sq * ns.next();
            if (nr < 0.0) nr = -nr;
            const double ylocal = i_inf / c;
            if ((r - ylocal) * (nr - ylocal) < kSkip * dt) {
                const double mn = bridge_min(r, nr, dt, ns.next_double_pos());
                if (mn > 0.0 && c * mn < i_inf) i_inf = c * mn;
            }
            r = nr;
            if (r <= opt.low_rescale) {
                c *= r;
                r = 1.0;
            }
            if (i_inf / (c * r) < opt.eps_term) return BesselLawScalars{true, i_inf};
        }
        c *= r;
        r = 1.0;
    }
    return BesselLawScalars{false, i_inf};
}

DriftedLawScalars sample_drifted_bm_sup(std::uint64_t seed, const DriftedLawOptions& opt) {
    NormalSampler ns(seed);
    const double dt = opt.step;
    const double sq = std::sqrt(dt);
    const std::size_t steps = static_cast<std::size_t>(std::llround(opt.horizon / dt));
    double x = opt.x0, xsup = opt.x0;
    for (std::size_t i = 1; i <= steps; ++i) {
        const double nx = x + opt.drift * dt + sq * ns.next();
        if (x * nx < kSkip * dt) {
            const double mn = bridge_min(x, nx, dt, ns.next_double_pos());
            if (mn <= 0.0) return DriftedLawScalars{true, xsup};
        }
        if ((xsup - x) * (xsup - nx) < kSkip * dt) {
            const double mx = bridge_max(x, nx, dt, ns.next_double_pos());
            if (mx > xsup) xsup = mx;
        }
        x = nx;
    }
    return DriftedLawScalars{false, xsup};
}

PoissonLawScalars sample_poisson_log_sup(std::uint64_t seed, const PoissonLawOptions& opt) {
    Xoshiro256pp rng(seed);
    const double comp_rate = opt.rate_c * (-std::expm1(-opt.f_const));
    const double ln_eps = std::log(opt.eps_stop);
    double t = 0.0, sum_f = 0.0, lsup = 0.0;
    for (double jumps = 0.0; jumps < opt.max_jumps; jumps += 1.0) {
        t += -std::log(rng.next_double_pos()) / opt.rate_c;
        const double pre = -sum_f + comp_rate * t;  // left limit at the jump
        if (pre > lsup) lsup = pre;
        sum_f += opt.f_const;
        if ((pre - opt.f_const) - lsup < ln_eps) return PoissonLawScalars{true, lsup};
    }
    return PoissonLawScalars{false, lsup};
}

GridContinuation continue_stopped_bm_grid(NormalSampler& ns, double b0, double s0, double t0,
                                          double step, double leg_horizon, int max_legs) {
    if (!(b0 > 0.0)) throw std::invalid_argument("continue_stopped_bm_grid: b0 must be > 0");
    GridContinuation out;
    out.s_grid = s0;
    out.g_time = -1.0;  // no record seen during the continuation
    const double sq = std::sqrt(step);
    const std::size_t steps = static_cast<std::size_t>(std::llround(leg_horizon / step));
    double b = b0, c = 1.0, t_base = t0;
    for (int leg = 0; leg < max_legs; ++leg) {
        ++out.legs;
        for (std::size_t i = 1; i <= steps; ++i) {
            const double nb = b + sq * ns.next();
            if (nb <= 0.0) {
                out.resolved = true;
                out.t0_time = t_base + c * c * (double(i) * step);
                return out;
            }
            const double nb_orig = c * nb;
            if (nb_orig > out.s_grid) {
                out.s_grid = nb_orig;
                out.g_time = t_base + c * c * (double(i) * step);
            }
            b = nb;
        }
        t_base += c * c * leg_horizon;
        c *= b;
        b = 1.0;
    }
    out.t0_time = t_base;
    return out;
}

}  // namespace maxmart
