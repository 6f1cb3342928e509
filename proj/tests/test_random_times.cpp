#include "doctest.h"
#include "maxmart/core_paths.hpp"
#include "maxmart/random_times.hpp"

using namespace maxmart;

namespace {

Path make(std::vector<double> v) {
    const std::size_t n = v.size();
    return Path(TimeGrid(0.0, 1.0, n), std::move(v));
}

}  // namespace

TEST_CASE("last passage hand examples") {
    {
        const auto N = make({1.0, 2.0, 1.5, 0.5});
        CHECK(last_passage(N, running_supremum(N)).index == 1);
    }
    {
        const auto N = make({3.0, 2.0, 1.0});
        CHECK(last_passage(N, running_supremum(N)).index == 0);  // only the start touches
    }
    {
        // flat stretch at the maximum: the latest touch wins
        const auto N = make({1.0, 2.0, 2.0, 1.0});
        CHECK(last_passage(N, running_supremum(N)).index == 2);
    }
}

TEST_CASE("last passage coincides with the last strict increase of S") {
    const auto N = make({1.0, 0.8, 1.2, 1.1, 1.4, 0.3, 0.2});
    const auto S = running_supremum(N);
    const auto g = last_passage(N, S);
    CHECK(g.index == 4);
    // S constant after g
    for (std::size_t i = g.index; i < S.size(); ++i) CHECK(S[i] == S[g.index]);
}

TEST_CASE("pseudo stopping time: single dip") {
    const auto N = make({1.0, 0.4, 1.0, 2.0});
    const auto S = running_supremum(N);
    const auto g = last_passage(N, S);
    CHECK(g.index == 3);
    const auto [rho, r] = pseudo_stopping_time(N, S, g);
    CHECK(rho.index == 1);
    CHECK(r == doctest::Approx(0.4));
}

TEST_CASE("pseudo stopping time: nondecreasing path has ratio 1, latest index below g") {
    // N/S = 1 everywhere; the infimum 1 is attained at every index < g and
    // ties resolve to the latest one
    const auto N = make({1.0, 1.5, 2.0, 3.0});
    const auto S = running_supremum(N);
    const auto g = last_passage(N, S);
    CHECK(g.index == 3);
    const auto [rho, r] = pseudo_stopping_time(N, S, g);
    CHECK(r == doctest::Approx(1.0));
    CHECK(rho.index == g.index - 1);
}

TEST_CASE("pseudo stopping time propagates NOT_ATTAINED") {
    const auto N = make({1.0, 0.5});
    const auto S = running_supremum(N);
    const auto [rho, r] = pseudo_stopping_time(N, S, TimeIndex::not_attained());
    CHECK_FALSE(rho.attained());
    CHECK(r == 1.0);
}

TEST_CASE("rho <= g always; strictly decreasing ratio gives rho = g-1") {
    const auto N = make({1.0, 0.9, 0.8, 1.5});  // ratio dips then the max jumps at 3
    const auto S = running_supremum(N);
    const auto g = last_passage(N, S);
    const auto [rho, r] = pseudo_stopping_time(N, S, g);
    CHECK(rho.index <= g.index);
    CHECK(rho.index == 2);
    CHECK(r == doctest::Approx(0.8));
}

TEST_CASE("hitting time directions") {
    const auto p = make({1.0, 2.0, 3.0});
    CHECK(hitting_time(p, 2.5, Direction::Up).index == 2);
    const auto q = make({1.0, 0.5, -0.1});
    CHECK(hitting_time(q, 0.0, Direction::Down).index == 2);
    CHECK_FALSE(hitting_time(p, 99.0, Direction::Up).attained());
}
