#include <cmath>

#include "doctest.h"
#include "maxmart/mc_engine.hpp"
#include "maxmart/rng.hpp"

using namespace maxmart;

TEST_CASE("survival estimator") {
    std::vector<double> fives(200, 5.0);
    const auto a = estimate_survival(fives, 3.0);
    CHECK(a.p_hat == 1.0);
    CHECK(a.ci_halfwidth == 0.0);
    const auto b = estimate_survival(fives, 6.0);
    CHECK(b.p_hat == 0.0);
    std::vector<double> tiny(50, 1.0);
    CHECK_THROWS_AS(estimate_survival(tiny, 0.5), std::invalid_argument);
}

TEST_CASE("ks self-test passes on its own null and fails on a planted alternative") {
    Xoshiro256pp rng(99);
    int passes = 0;
    for (int rep = 0; rep < 3; ++rep) {
        std::vector<double> u(20000);
        for (auto& x : u) x = rng.next_double();
        if (ks_test(u, RefDist::Uniform01).pass) ++passes;
    }
    CHECK(passes >= 2);
    std::vector<double> constant(5000, 0.3);
    const auto bad = ks_test(constant, RefDist::Uniform01);
    CHECK_FALSE(bad.pass);
    CHECK(bad.d > 0.5);
    std::vector<double> few(100, 0.1);
    CHECK_THROWS_AS(ks_test(few, RefDist::Uniform01), std::invalid_argument);
}

TEST_CASE("ks reference distributions") {
    Xoshiro256pp rng(7);
    std::vector<double> e(20000), r(20000);
    for (auto& x : e) x = -std::log(rng.next_double_pos()) / 2.0;  // Exp(2)
    CHECK(ks_test(e, RefDist::Exponential, 2.0).pass);
    for (auto& x : r) x = 1.0 / rng.next_double_pos();  // reciprocal uniform
    CHECK(ks_test(r, RefDist::ReciprocalUniform).pass);
}

TEST_CASE("martingale residual test: null passes, planted drift fails") {
    NormalSampler ns(123);
    std::vector<std::vector<double>> null_cp(2), drift_cp(2);
    for (int i = 0; i < 20000; ++i) {
        const double z1 = ns.next(), z2 = ns.next();
        null_cp[0].push_back(z1);
        null_cp[1].push_back(z1 + z2);
        drift_cp[0].push_back(z1 + 0.25);
        drift_cp[1].push_back(z1 + z2 + 0.5);
    }
    CHECK(martingale_residual_test(null_cp).pass);
    const auto bad = martingale_residual_test(drift_cp);
    CHECK_FALSE(bad.pass);
    CHECK(bad.statistic > 5.0);
}

TEST_CASE("quadratic variation test: planted scaling fails") {
    NormalSampler ns(55);
    std::vector<double> qv(5000), qv4(5000), tgt(5000, 1.0);
    for (int i = 0; i < 5000; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 100; ++j) {
            const double d = ns.next() * 0.1;
            acc += d * d;
        }
        qv[i] = acc;
        qv4[i] = 4.0 * acc;
    }
    CHECK(quadratic_variation_test(qv, tgt).pass);
    CHECK_FALSE(quadratic_variation_test(qv4, tgt).pass);
}

TEST_CASE("independence test: independent streams pass, u = v fails") {
    Xoshiro256pp rng(11);
    std::vector<double> u(20000), v(20000);
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = rng.next_double();
        v[i] = rng.next_double();
    }
    CHECK(independence_test(u, v).pass);
    const auto same = independence_test(u, u);
    CHECK_FALSE(same.pass);
    CHECK(same.rho_s == doctest::Approx(1.0));
    std::vector<double> shorter(10, 0.0);
    CHECK_THROWS_AS(independence_test(u, shorter), std::invalid_argument);
}

TEST_CASE("nested deviation test: calibrated noise passes, bias fails") {
    NormalSampler ns(31);
    std::vector<double> dev(300), sem(300, 0.02);
    for (auto& d : dev) d = 0.02 * ns.next();
    CHECK(nested_deviation_test(dev, sem).pass);
    for (auto& d : dev) d += 0.05;
    CHECK_FALSE(nested_deviation_test(dev, sem).pass);
}

TEST_CASE("two mean equality test") {
    NormalSampler ns(77);
    std::vector<double> a(30000), b(30000);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = ns.next();
        b[i] = ns.next();
    }
    CHECK(two_mean_equality_test(a, b).pass);
    for (auto& x : b) x += 0.2;
    CHECK_FALSE(two_mean_equality_test(a, b).pass);
}

TEST_CASE("drift binner: planted 1/x drift passes, zero drift fails") {
    const double dt = 1e-3;
    NormalSampler ns(2025);
    DriftBinner good(0.5, 2.5, 8, dt), flat(0.5, 2.5, 8, dt);
    for (int i = 0; i < 200000; ++i) {
        const double x = 0.5 + 2.0 * ns.next_double();
        good.add(x, dt / x + std::sqrt(dt) * ns.next());
        flat.add(x, std::sqrt(dt) * ns.next());
    }
    auto th = [](double x) { return 1.0 / x; };
    CHECK(good.evaluate(th, 2.0).pass);
    const auto bad = flat.evaluate(th, 2.0);
    CHECK_FALSE(bad.pass);
    CHECK(bad.statistic > 2.0);
}

TEST_CASE("parallel batch is independent of the worker count") {
    auto run = [](unsigned workers) {
        return run_scalar_batch<double>(10001, workers, [](std::uint64_t i) {
            NormalSampler ns(path_stream_seed(404, i));
            double acc = 0.0;
            for (int k = 0; k < 10; ++k) acc += ns.next();
            return acc;
        });
    };
    const auto a = run(1), b = run(2), c = run(5);
    CHECK(a == b);
    CHECK(a == c);
}
