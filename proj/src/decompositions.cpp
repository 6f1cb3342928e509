#include "maxmart/decompositions.hpp"

#include <algorithm>
#include <cmath>

namespace maxmart {

DecomposedPath decompose(const Path& N) {
    if (N.values.empty()) throw std::invalid_argument("decompose: empty path");
    if (N[0] != 1.0) throw std::invalid_argument("decompose: N[0] must be 1");
    for (std::size_t i = 0; i < N.size(); ++i) {
        // a clamped zero is allowed only as an absorbed tail
        const bool absorbed_tail = N.stopped_at && i >= *N.stopped_at && N[i] == 0.0;
        if (!(N[i] > 0.0) && !absorbed_tail)
            throw std::invalid_argument("decompose: N must be positive");
    }

    Path S = running_supremum(N);
    const std::size_t n = N.size();
    std::vector<double> z(n), m(n), a(n);
    double macc = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = N[i] / S[i];
        a[i] = std::log(S[i]);
        m[i] = macc;
        if (i + 1 < n) macc += (N[i + 1] - N[i]) / S[i];
    }
    return DecomposedPath{N, std::move(S), Path(N.grid, std::move(z), N.stopped_at),
                          Path(N.grid, std::move(m)), Path(N.grid, std::move(a))};
}

namespace {

ReconstructedPath rebuild(const Path& Z, const Path& M,
                          const std::vector<std::size_t>* jump_indices, double z_dead) {
    require_same_grid(Z, M, "reconstruct_multiplicative");
    if (Z.values.empty()) throw std::invalid_argument("reconstruct_multiplicative: empty path");
    if (Z[0] != 1.0) throw std::invalid_argument("reconstruct_multiplicative: Z[0] must be 1");
    for (double v : Z.values)
        if (v < 0.0 || v > 1.0 + 1e-12)
            throw std::invalid_argument("reconstruct_multiplicative: Z must lie in [0, 1]");
    if (jump_indices) {
        for (std::size_t j : *jump_indices) {
            if (j == 0 || j >= Z.size())
                throw std::invalid_argument("reconstruct_multiplicative_jumps: bad jump index");
            if (Z[j] - Z[j - 1] > 0.0)
                throw std::invalid_argument(
                    "reconstruct_multiplicative_jumps: declared jump must not be positive");
        }
    }

    const std::size_t n = Z.size();
    std::vector<double> nv(n), sv(n);
    double L = 0.0, A = 0.0;
    nv[0] = 1.0;
    sv[0] = 1.0;
    bool dead = false;
    for (std::size_t i = 1; i < n; ++i) {
        if (!dead && Z[i - 1] > z_dead) {
            const double x = (M[i] - M[i - 1]) / Z[i - 1];
            if (jump_indices) {
                // exact jump algebra: log(1+x) covers continuous and jump steps alike
                if (x <= -1.0) {
                    dead = true;
                } else {
                    L += std::log1p(x);
                }
            } else {
                L += x - 0.5 * x * x;
            }
            A = std::max(A, L);
        }
        if (Z[i] <= z_dead) dead = true;
        sv[i] = std::exp(A);
        nv[i] = dead ? 0.0 : std::exp(L);
    }
    return ReconstructedPath{Path(Z.grid, std::move(nv)), Path(Z.grid, std::move(sv))};
}

}  // namespace

ReconstructedPath reconstruct_multiplicative(const Path& Z, const Path& M, double z_dead) {
    return rebuild(Z, M, nullptr, z_dead);
}

ReconstructedPath reconstruct_multiplicative_jumps(const Path& Z, const Path& M,
                                                   const std::vector<std::size_t>& jump_indices,
                                                   double z_dead) {
    return rebuild(Z, M, &jump_indices, z_dead);
}

double multiplicative_jump_factor(double x) { return (1.0 + x) * std::exp(-x); }

AzemaYorSides azema_yor(const TestFunction& f, const Path& N, const Path& S) {
    require_same_grid(N, S, "azema_yor");
    const std::size_t n = N.size();
    std::vector<double> xs(n), is(n);
    double acc = f.primitive(S[0]);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = f.primitive(S[i]) - f.value(S[i]) * (S[i] - N[i]);
        is[i] = acc;
        if (i + 1 < n) acc += f.value(S[i]) * (N[i + 1] - N[i]);
    }
    return AzemaYorSides{Path(N.grid, std::move(xs)), Path(N.grid, std::move(is))};
}

double h_transform(const TestFunction& f, double x) {
    if (x <= 0.0) throw std::invalid_argument("h_transform: x must be > 0");
    return f.h(x);
}

double conditional_sup_law(const TestFunction& f, double n, double s) {
    if (!(n > 0.0) || !(n <= s)) throw std::invalid_argument("conditional_sup_law: need 0 < n <= s");
    return f.value(s) * (1.0 - n / s) + n * f.reciprocal_tail(s);
}

double rho_density(double x, double n, double s) {
    if (x > s) return 1.0 / n;
    if (x == s) {
        if (n == s) return 0.0;  // the atom at s carries no mass when n = s
        return -1.0 / (s - n);
    }
    return 0.0;
}

Path realized_bracket(const Path& X, const Path& Y) {
    require_same_grid(X, Y, "realized_bracket");
    std::vector<double> br(X.size());
    double acc = 0.0;
    br[0] = 0.0;
    for (std::size_t i = 1; i < X.size(); ++i) {
        acc += (X[i] - X[i - 1]) * (Y[i] - Y[i - 1]);
        br[i] = acc;
    }
    return Path(X.grid, std::move(br));
}

Path enlargement_compensator(const Path& X, const Path& N, const Path& S, TimeIndex g,
                             const Path& bracket_XN, double s_end, double den_floor) {
    require_same_grid(X, N, "enlargement_compensator");
    require_same_grid(X, bracket_XN, "enlargement_compensator");
    const std::size_t n = X.size();
    const std::size_t gi = g.attained() ? g.index : n;  // not attained: pre-g part only
    std::vector<double> c(n);
    double acc = 0.0;
    c[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t j = i - 1;
        const double dbr = bracket_XN[i] - bracket_XN[j];
        if (j < gi) {
            acc += dbr / N[j];
        } else {
            acc -= dbr / std::max(s_end - N[j], den_floor);
        }
        c[i] = acc;
    }
    (void)S;
    return Path(X.grid, std::move(c));
}

DualProjectionSample dual_projection_sides(const TestFunction& k_of_time, const Path& N,
                                           const Path& S, TimeIndex g) {
    require_same_grid(N, S, "dual_projection_sides");
    const double tg = g.attained() ? N.grid.time_at(g.index) : N.grid.horizon();
    double rhs = 0.0;
    for (std::size_t j = 0; j + 1 < S.size(); ++j) {
        const double ds = S[j + 1] - S[j];
        if (ds != 0.0) rhs += k_of_time.value(N.grid.time_at(j)) * ds / S[j];
    }
    return DualProjectionSample{k_of_time.value(tg), rhs};
}

}  // namespace maxmart
