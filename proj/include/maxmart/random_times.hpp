#ifndef MAXMART_RANDOM_TIMES_HPP_
#define MAXMART_RANDOM_TIMES_HPP_

#include <utility>

#include "maxmart/path.hpp"

namespace maxmart {

enum class Direction { Up, Down };

// Per-path record of the detected random times. s_end is the terminal
// supremum (the S_infinity proxy), r_rho the value of N/S at rho.
struct RandomTimeRecord {
    TimeIndex g;
    TimeIndex rho;
    TimeIndex t0;
    double s_end = 0.0;
    double r_rho = 1.0;
};

// Last index i with N[i] = S[i] = S[end] -- equivalently the last index at
// which the running maximum increases (0 if S is flat). Ties: latest wins.
TimeIndex last_passage(const Path& N, const Path& S);

// rho = last index strictly before g attaining inf_{u<=g} N[u]/S[u].
// Returns (rho, r_rho); propagates NOT_ATTAINED when g is not attained.
std::pair<TimeIndex, double> pseudo_stopping_time(const Path& N, const Path& S, TimeIndex g);

// First index where the path strictly exceeds (Up) or reaches-or-crosses
// (Down) the level; NOT_ATTAINED if never.
TimeIndex hitting_time(const Path& p, double level, Direction direction);

}  // namespace maxmart

#endif  // MAXMART_RANDOM_TIMES_HPP_
