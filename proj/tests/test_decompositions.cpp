#include <cmath>

#include "doctest.h"
#include "maxmart/core_paths.hpp"
#include "maxmart/decompositions.hpp"
#include "maxmart/mc_engine.hpp"
#include "maxmart/processes.hpp"
#include "maxmart/rng.hpp"

using namespace maxmart;

namespace {

Path make(std::vector<double> v, double step = 1.0) {
    const std::size_t n = v.size();
    return Path(TimeGrid(0.0, step, n), std::move(v));
}

}  // namespace

TEST_CASE("decompose: constant path") {
    const auto d = decompose(make({1.0, 1.0, 1.0}));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(d.Z[i] == 1.0);
        CHECK(d.A[i] == 0.0);
        CHECK(d.M[i] == 1.0);
    }
}

TEST_CASE("decompose: hand example [1, 2, 1]") {
    const auto d = decompose(make({1.0, 2.0, 1.0}));
    CHECK(d.S.values == std::vector<double>{1.0, 2.0, 2.0});
    CHECK(d.Z.values == std::vector<double>{1.0, 1.0, 0.5});
    CHECK(d.A[1] == doctest::Approx(std::log(2.0)));
    CHECK(d.A[2] == doctest::Approx(std::log(2.0)));
    CHECK(d.M.values == std::vector<double>{1.0, 2.0, 1.5});
}

TEST_CASE("decompose rejects bad inputs") {
    CHECK_THROWS_AS(decompose(make({2.0, 1.0})), std::invalid_argument);   // N0 != 1
    CHECK_THROWS_AS(decompose(make({1.0, -0.5})), std::invalid_argument);  // nonpositive
    CHECK_THROWS_AS(decompose(make({1.0, 0.0})), std::invalid_argument);   // zero, not absorbed
}

TEST_CASE("decompose: dS is carried by {Z = 1} exactly") {
    const TimeGrid grid(0.0, 1e-3, 3001);
    const auto N = gen_brownian_stopped(1.0, grid, path_stream_seed(11, 0));
    const auto d = decompose(N);
    for (std::size_t i = 1; i < N.size(); ++i) {
        if (d.S[i] > d.S[i - 1]) CHECK(d.Z[i] == 1.0);
    }
}

TEST_CASE("decompose: terminal identity on resolved paths") {
    // M_end ~ 1 + log S_end when N/S has collapsed
    const TimeGrid grid(0.0, 1e-3, 20001);
    int used = 0;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 40; ++i) {
        const auto N = gen_brownian_stopped(1.0, grid, path_stream_seed(12, i));
        if (!N.stopped_at) continue;
        ++used;
        const auto d = decompose(N);
        const std::size_t last = N.size() - 1;
        worst = std::max(worst, std::abs(d.M[last] - (1.0 + d.A[last])));
    }
    REQUIRE(used > 10);
    CHECK(worst < 0.2);  // O(sqrt(step)) discretization residual
}

TEST_CASE("martingale property of M over a stopped-BM batch") {
    const TimeGrid grid(0.0, 1e-3, 1001);
    const int n = 20000;
    std::vector<double> m_end(n);
    for (int i = 0; i < n; ++i) {
        const auto N = gen_brownian_stopped(1.0, grid, path_stream_seed(13, i));
        const auto d = decompose(N);
        m_end[i] = d.M.back();
    }
    const double m = mean_of(m_end), s = sem_of(m_end);
    CHECK(std::abs(m - 1.0) <= 3.5 * s);
}

TEST_CASE("reconstruct: Z = 1 gives N = S = 1") {
    const auto Z = make({1.0, 1.0, 1.0});
    const auto M = make({1.0, 1.0, 1.0});
    const auto rec = reconstruct_multiplicative(Z, M);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rec.N[i] == doctest::Approx(1.0));
        CHECK(rec.S[i] == doctest::Approx(1.0));
    }
}

TEST_CASE("reconstruct rejects bad inputs") {
    CHECK_THROWS_AS(reconstruct_multiplicative(make({0.5, 0.5}), make({1.0, 1.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(reconstruct_multiplicative(make({1.0, 1.5}), make({1.0, 1.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        reconstruct_multiplicative_jumps(make({1.0, 0.5, 1.0}), make({1.0, 0.5, 1.0}), {2}),
        std::invalid_argument);  // declared jump is positive
}

TEST_CASE("reconstruct roundtrip error shrinks under mesh refinement") {
    auto mean_err = [](double step, std::uint64_t seed) {
        const TimeGrid grid(0.0, step, std::size_t(2.0 / step) + 1);
        double tot = 0.0;
        const int n = 40;
        for (int i = 0; i < n; ++i) {
            const auto N = gen_brownian_stopped(1.0, grid, path_stream_seed(seed, i));
            const auto d = decompose(N);
            const auto rec = reconstruct_multiplicative(d.Z, d.M);
            double e = 0.0;
            for (std::size_t j = 0; j < N.size(); ++j)
                e = std::max(e, std::abs(rec.N[j] - N[j]));
            tot += e;
        }
        return tot / n;
    };
    const double coarse = mean_err(4e-3, 21);
    const double fine = mean_err(1e-3, 22);
    CHECK(fine < coarse);
}

TEST_CASE("reconstruct: recovered S is consistent with the recovered N") {
    const TimeGrid grid(0.0, 1e-3, 2001);
    const auto N = gen_brownian_stopped(1.0, grid, path_stream_seed(23, 5));
    const auto d = decompose(N);
    const auto rec = reconstruct_multiplicative(d.Z, d.M);
    const auto S2 = running_supremum(rec.N);
    for (std::size_t j = 0; j < N.size(); ++j) {
        if (rec.N[j] == 0.0) break;  // frozen after the dead cutoff
        CHECK(rec.S[j] == doctest::Approx(S2[j]).epsilon(1e-9));
    }
}

TEST_CASE("jump factor evaluates the product term") {
    CHECK(multiplicative_jump_factor(-0.5) == doctest::Approx(0.5 * std::exp(0.5)));
    CHECK(multiplicative_jump_factor(0.0) == 1.0);
}

TEST_CASE("jump reconstruction with no declared jumps tracks the continuous one") {
    const TimeGrid grid(0.0, 1e-3, 2001);
    const auto N = gen_brownian_stopped(1.0, grid, path_stream_seed(29, 2));
    const auto d = decompose(N);
    const auto a = reconstruct_multiplicative(d.Z, d.M);
    const auto b = reconstruct_multiplicative_jumps(d.Z, d.M, {});
    for (std::size_t j = 0; j < N.size(); ++j)
        CHECK(a.N[j] == doctest::Approx(b.N[j]).epsilon(1e-3));
}

TEST_CASE("poisson roundtrip is exact at jump times") {
    PoissonMartingaleSpec spec;
    spec.rate_c = 1.0;
    spec.f = TestFunction::constant(1.0);
    const TimeGrid grid(0.0, 1e-3, 20001);
    const auto p = gen_poisson_exp_martingale(spec, grid, 1234);
    const auto d = decompose(p.E);
    const auto rec = reconstruct_multiplicative_jumps(d.Z, d.M, p.jump_indices);
    for (std::size_t j : p.jump_indices)
        CHECK(std::abs(rec.N[j] - p.E[j]) / p.E[j] < 1e-9);
}

TEST_CASE("azema-yor: f = 1 collapses both sides to N") {
    const TimeGrid grid(0.0, 1e-3, 2001);
    const auto N = gen_brownian_stopped(1.0, grid, path_stream_seed(31, 7));
    const auto S = running_supremum(N);
    const auto sides = azema_yor(TestFunction::constant(1.0), N, S);
    for (std::size_t j = 0; j < N.size(); ++j) {
        CHECK(sides.X[j] == doctest::Approx(N[j]).epsilon(1e-12));
        CHECK(sides.integral_side[j] == doctest::Approx(N[j]).epsilon(1e-12));
    }
}

TEST_CASE("azema-yor: f = 0 is identically zero") {
    const auto N = make({1.0, 2.0, 1.5});
    const auto sides = azema_yor(TestFunction::constant(0.0), N, running_supremum(N));
    for (double v : sides.X.values) CHECK(v == 0.0);
    for (double v : sides.integral_side.values) CHECK(v == 0.0);
}

TEST_CASE("azema-yor indicator form") {
    const auto N = make({1.0, 3.0, 2.0});
    const auto S = running_supremum(N);
    const auto sides = azema_yor(TestFunction::indicator(2.0), N, S);
    // X = (S-2)^+ - 1_{S>2} (S - N)
    CHECK(sides.X[0] == 0.0);
    CHECK(sides.X[1] == doctest::Approx(1.0));          // (3-2) - (3-3)
    CHECK(sides.X[2] == doctest::Approx(1.0 - 1.0));    // (3-2) - (3-2)
}

TEST_CASE("h transform against the density identity") {
    // int rho(x) lambda(dx) f(x) should reproduce h_f at n = s
    const auto f = TestFunction::indicator(3.0);
    for (double s : {1.0, 2.0, 3.5}) {
        const double lhs = h_transform(f, s);
        // -(1/s) f(s) + int_s^inf f/x^2 evaluated in closed form
        const double rhs = -f.value(s) / s + f.reciprocal_tail(s);
        CHECK(lhs == doctest::Approx(rhs));
    }
    CHECK(h_transform(TestFunction::constant(4.0), 1.3) == 0.0);
}

TEST_CASE("conditional law of the supremum") {
    const auto f1 = TestFunction::indicator(4.0);
    // at the start (n = s = 1): P(S > a) = 1/a
    CHECK(conditional_sup_law(f1, 1.0, 1.0) == doctest::Approx(0.25));
    // total mass
    CHECK(conditional_sup_law(TestFunction::constant(1.0), 0.7, 2.0) == doctest::Approx(1.0));
    // n = s = 2, f = indicator(3): 2 * int_3 dx/x^2 = 2/3
    CHECK(conditional_sup_law(TestFunction::indicator(3.0), 2.0, 2.0) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(conditional_sup_law(f1, 2.0, 1.0), std::invalid_argument);
    // closed-form cross-check over orderings of a and s
    for (double a : {1.5, 2.0, 3.0}) {
        for (double s : {1.2, 2.0, 4.0}) {
            for (double n : {0.4 * s, s}) {
                const double expect =
                    (s > a ? (1.0 - n / s) : 0.0) + n / std::max(a, s);
                CHECK(conditional_sup_law(TestFunction::indicator(a), n, s) ==
                      doctest::Approx(expect));
            }
        }
    }
}

TEST_CASE("rho density branches") {
    CHECK(rho_density(1.0, 0.5, 2.0) == 0.0);              // x < s
    CHECK(rho_density(3.0, 0.5, 2.0) == doctest::Approx(2.0));  // 1/n
    CHECK(rho_density(2.0, 0.5, 2.0) == doctest::Approx(-1.0 / 1.5));
    CHECK(rho_density(2.0, 2.0, 2.0) == 0.0);              // guarded atom
}

TEST_CASE("enlargement compensator: zero bracket leaves X alone") {
    const auto X = make({1.0, 1.5, 1.2, 0.8});
    const auto S = running_supremum(X);
    const auto zero = make({0.0, 0.0, 0.0, 0.0});
    const auto C =
        enlargement_compensator(X, X, S, TimeIndex(1), zero, S.back(), 0.01);
    for (double v : C.values) CHECK(v == 0.0);
}

TEST_CASE("enlargement compensator: gbm pre-g part is 2 nu <X, B>") {
    const TimeGrid grid(0.0, 1e-3, 1001);
    const GbmSpec spec{0.5};
    const auto g = gen_gbm_martingale(spec, grid, 4242);
    // X = B, N = gbm: d<X, N> = 2 nu N dt, so pre-g compensator = int 2 nu dt
    std::vector<double> br(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i)
        br[i] = i == 0 ? 0.0 : br[i - 1] + 2.0 * spec.nu * g.N[i - 1] * grid.step;
    const auto S = running_supremum(g.N);
    const std::size_t gi = grid.n_points - 1;  // everything pre-g
    const auto C = enlargement_compensator(g.driver_B, g.N, S, TimeIndex(gi),
                                           Path(grid, br), S.back(), 0.01);
    // C should equal 2 nu <X, B> = 2 nu t along the pre-g stretch
    for (std::size_t i = 0; i < grid.n_points; i += 200)
        CHECK(C[i] == doctest::Approx(2.0 * spec.nu * grid.time_at(i)).epsilon(1e-9));
}

TEST_CASE("dual projection sides: trivial weights") {
    const auto N = make({1.0, 2.0, 1.0});
    const auto S = running_supremum(N);
    const auto g = last_passage(N, S);
    const auto zero = dual_projection_sides(TestFunction::constant(0.0), N, S, g);
    CHECK(zero.lhs == 0.0);
    CHECK(zero.rhs == 0.0);
    const auto one = dual_projection_sides(TestFunction::constant(1.0), N, S, g);
    CHECK(one.lhs == 1.0);
    CHECK(one.rhs == doctest::Approx(1.0));  // sum dS/S = (2-1)/1
}
