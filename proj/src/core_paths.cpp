#include "maxmart/core_paths.hpp"

#include <algorithm>
#include <cmath>

namespace maxmart {

namespace {

void require_nonempty(const Path& p, const char* what) {
    if (p.values.empty()) throw std::invalid_argument(std::string(what) + ": empty path");
}

}  // namespace

Path running_supremum(const Path& p) {
    require_nonempty(p, "running_supremum");
    std::vector<double> out(p.size());
    double m = p[0];
    for (std::size_t i = 0; i < p.size(); ++i) {
        m = std::max(m, p[i]);
        out[i] = m;
    }
    return Path(p.grid, std::move(out), p.stopped_at);
}

Path running_infimum(const Path& p) {
    require_nonempty(p, "running_infimum");
    std::vector<double> out(p.size());
    double m = p[0];
    for (std::size_t i = 0; i < p.size(); ++i) {
        m = std::min(m, p[i]);
        out[i] = m;
    }
    return Path(p.grid, std::move(out), p.stopped_at);
}

Path ito_sum(const Path& k, const Path& x) {
    require_same_grid(k, x, "ito_sum");
    std::vector<double> out(x.size());
    double acc = 0.0;
    out[0] = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        acc += k[i - 1] * (x[i] - x[i - 1]);
        out[i] = acc;
    }
    return Path(x.grid, std::move(out));
}

Reflection skorokhod_reflection(const Path& y) {
    require_nonempty(y, "skorokhod_reflection");
    if (y[0] != 0.0) throw std::invalid_argument("skorokhod_reflection: y[0] must be 0");
    std::vector<double> z(y.size()), a(y.size());
    double run = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        run = std::max(run, -y[i]);
        a[i] = run;
        z[i] = y[i] + run;
    }
    return Reflection{Path(y.grid, std::move(z), y.stopped_at), Path(y.grid, std::move(a))};
}

BalayageSides balayage_transform(const Path& k, const Path& y, double eps_zero) {
    require_same_grid(k, y, "balayage_transform");
    const std::size_t n = y.size();
    std::vector<double> lhs(n), rhs(n);
    std::size_t g = 0;  // last visited index of the zero set, 0 if none yet
    double acc = k[0] * y[0];
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(y[i]) <= eps_zero) g = i;
        lhs[i] = k[g] * y[i];
        rhs[i] = acc;
        if (i + 1 < n) acc += k[g] * (y[i + 1] - y[i]);
    }
    return BalayageSides{Path(y.grid, std::move(lhs)), Path(y.grid, std::move(rhs))};
}

}  // namespace maxmart
