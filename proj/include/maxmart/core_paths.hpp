#ifndef MAXMART_CORE_PATHS_HPP_
#define MAXMART_CORE_PATHS_HPP_

#include <utility>

#include "maxmart/path.hpp"

namespace maxmart {

// Pathwise running extrema: out[i] = max (resp. min) of p[0..i].
Path running_supremum(const Path& p);
Path running_infimum(const Path& p);

// Left-point discretization of the stochastic integral  int k dX:
// out[0] = 0, out[i] = sum_{j<i} k[j] * (x[j+1] - x[j]).
// The left endpoint encodes predictability of the integrand.
Path ito_sum(const Path& k, const Path& x);

// Skorokhod reflection of y with y[0] = 0:
// a[i] = max(0, max_{s<=i}(-y[s])), z = y + a. a is the minimal pushing
// process keeping z nonnegative; da is carried by {z = 0} at grid resolution.
struct Reflection {
    Path z;
    Path a;
};
Reflection skorokhod_reflection(const Path& y);

// Both sides of the balayage identity  k_{g_t} y_t = k_0 y_0 + int k_{g_s} dy_s,
// where g_t is the last index <= t with |y| <= eps_zero (0 if the zero set is
// empty so far). For y = S - N the discrete zero set is exact and eps_zero = 0
// is the right default.
struct BalayageSides {
    Path lhs;
    Path rhs;
};
BalayageSides balayage_transform(const Path& k, const Path& y, double eps_zero = 0.0);

}  // namespace maxmart

#endif  // MAXMART_CORE_PATHS_HPP_
