#ifndef MAXMART_DECOMPOSITIONS_HPP_
#define MAXMART_DECOMPOSITIONS_HPP_

#include <vector>

#include "maxmart/core_paths.hpp"
#include "maxmart/path.hpp"
#include "maxmart/random_times.hpp"
#include "maxmart/test_function.hpp"

namespace maxmart {

// Z = N/S together with its additive parts: A = log S (increasing, carried by
// the records of S) and M = 1 + int dN/S (the martingale part). At grid level
// Z = M - A holds up to a discretization residual that shrinks with the step.
struct DecomposedPath {
    Path N;
    Path S;
    Path Z;
    Path M;
    Path A;
};

// Requires N > 0 with N[0] = 1.
DecomposedPath decompose(const Path& N);

// Rebuild the multiplicative pair (N, S) from the additive data (Z, M):
//   N = exp( int dM/Z - 1/2 int (dM/Z)^2 ),   S = exp(sup of the exponent).
// The running maximum of the exponent is the reflection identity; taking S
// from it guarantees S = running sup of the rebuilt N. Once Z falls below
// z_dead the path is treated as absorbed and (N, S) are frozen/zeroed.
//
// The additive pair is genuinely required: distinct local martingales share
// the same ratio path Z while their suprema differ (the growth of S during a
// stretch with Z = 1 is invisible in Z), so a Z-only inverse does not exist.
struct ReconstructedPath {
    Path N;
    Path S;
};

ReconstructedPath reconstruct_multiplicative(const Path& Z, const Path& M,
                                             double z_dead = 1e-10);

// No-positive-jumps version: every declared jump must have dZ <= 0. Non-jump
// and jump increments alike contribute exp(log(1 + dM/Z-)): for the jump
// steps this equals exp(dM/Z-) * (1 + dZ/Z-) exp(-dZ/Z-), the product factor
// of the jump decomposition, so jump algebra is exact.
ReconstructedPath reconstruct_multiplicative_jumps(const Path& Z, const Path& M,
                                                   const std::vector<std::size_t>& jump_indices,
                                                   double z_dead = 1e-10);

// The per-jump multiplicative factor (1 + x) e^{-x}, x = dZ/Z-.
double multiplicative_jump_factor(double dz_over_zminus);

// Both sides of F(S_t) - f(S_t)(S_t - N_t) = F(S_0) + int f(S_s) dN_s.
struct AzemaYorSides {
    Path X;
    Path integral_side;
};
AzemaYorSides azema_yor(const TestFunction& f, const Path& N, const Path& S);

// h_f(x) = int_x^inf (f(y) - f(x)) / y^2 dy
double h_transform(const TestFunction& f, double x);

// lambda_t(f) = f(s)(1 - n/s) + n int_s^inf f(x)/x^2 dx, the conditional law
// of the terminal supremum given the current pair (n, s).
double conditional_sup_law(const TestFunction& f, double n, double s);

// Density of lambda-dot w.r.t. lambda:
// rho(x) = -1/(s-n) on {x = s}, 1/n on {x > s}, 0 below s; the atom at x = s
// carries zero lambda-mass when n = s, so that branch is guarded to 0.
double rho_density(double x, double n, double s);

// Candidate compensator of X in the enlarged filtration:
//   C[i] = sum_{j<i, j<g} dBr_j / N[j]  -  sum_{j<i, j>=g} dBr_j / (s_end - N[j]),
// with the post-g denominator floored at den_floor. X - C is the candidate
// martingale handed to the residual tests. When g is not attained only the
// pre-g part is produced.
Path enlargement_compensator(const Path& X, const Path& N, const Path& S, TimeIndex g,
                             const Path& bracket_XN, double s_end, double den_floor);

// Cumulative realized covariation sum dX dY (left-closed), the default
// bracket estimator.
Path realized_bracket(const Path& X, const Path& Y);

// Per-path samples of E(k_g) = E(int k_s dS_s / S_s): lhs = k(t_g),
// rhs = sum_j k(t_j) (S[j+1] - S[j]) / S[j].
struct DualProjectionSample {
    double lhs;
    double rhs;
};
DualProjectionSample dual_projection_sides(const TestFunction& k_of_time, const Path& N,
                                           const Path& S, TimeIndex g);

}  // namespace maxmart

#endif  // MAXMART_DECOMPOSITIONS_HPP_
