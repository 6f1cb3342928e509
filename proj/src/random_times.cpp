#include "maxmart/random_times.hpp"

namespace maxmart {

TimeIndex last_passage(const Path& N, const Path& S) {
    require_same_grid(N, S, "last_passage");
    const double s_end = S.back();
    std::size_t g = 0;
    for (std::size_t i = 0; i < N.size(); ++i) {
        if (S[i] == s_end && N[i] == S[i]) g = i;
    }
    return TimeIndex(g);
}

std::pair<TimeIndex, double> pseudo_stopping_time(const Path& N, const Path& S, TimeIndex g) {
    require_same_grid(N, S, "pseudo_stopping_time");
    if (!g.attained()) return {TimeIndex::not_attained(), 1.0};
    const std::size_t gi = g.index;
    // running infimum of the ratio over [0, g]
    double inf = N[0] / S[0];
    for (std::size_t i = 1; i <= gi; ++i) inf = std::min(inf, N[i] / S[i]);
    if (gi == 0) return {TimeIndex(0), inf};
    // latest index strictly below g attaining the infimum
    std::size_t rho = 0;
    for (std::size_t i = 0; i < gi; ++i) {
        if (N[i] / S[i] <= inf) rho = i;
    }
    return {TimeIndex(rho), inf};
}

TimeIndex hitting_time(const Path& p, double level, Direction direction) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (direction == Direction::Up ? (p[i] > level) : (p[i] <= level)) return TimeIndex(i);
    }
    return TimeIndex::not_attained();
}

}  // namespace maxmart
