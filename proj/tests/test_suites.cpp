#include <cstdio>

#include "doctest.h"
#include "maxmart/suites.hpp"

using namespace maxmart;

namespace {

SuiteParams quick(std::uint64_t n = 5000) {
    SuiteParams p;
    p.n_paths = n;
    p.step = 2e-3;
    p.seed = 20240817;
    p.workers = 0;
    return p;
}

}  // namespace

TEST_CASE("registry is sorted, named per the shipped list, and validated") {
    const auto& reg = suite_registry();
    CHECK(reg.size() == 16);
    for (std::size_t i = 1; i < reg.size(); ++i) CHECK(reg[i - 1].name < reg[i].name);
    for (const char* name :
         {"doob-survival", "uniform-ratio", "log-sup-mean", "skorokhod-roundtrip",
          "azema-yor-pathwise", "conditional-sup-nested", "dual-projection",
          "mult-reconstruct-roundtrip", "enlargement-stopped-bm", "bessel3-pre-g-drift",
          "post-g-bessel3", "gbm-exp-law", "diffusion-scale-law", "bessel3-min-uniform",
          "poisson-exp1", "pseudo-stopping"})
        CHECK(find_suite(name) != nullptr);
    CHECK(find_suite("nonsense") == nullptr);
    CHECK_THROWS_AS(validate_suite_params("nonsense", quick()), std::invalid_argument);
    auto p = quick(10);
    CHECK_THROWS_AS(validate_suite_params("uniform-ratio", p), std::invalid_argument);
    auto pg = quick();
    pg.generator = "gbm";
    CHECK_THROWS_AS(validate_suite_params("doob-survival", pg), std::invalid_argument);
}

TEST_CASE("quick doob survival run passes and is reproducible" * doctest::timeout(600)) {
    const auto a = run_suite("doob-survival", quick());
    CHECK(a.pass);
    CHECK(a.n == 5000);
    CHECK(a.unresolved_fraction == 0.0);
    auto p1 = quick();
    p1.workers = 1;
    auto p3 = quick();
    p3.workers = 3;
    const auto b = run_suite("doob-survival", p1);
    const auto c = run_suite("doob-survival", p3);
    CHECK(b.statistic == c.statistic);
    CHECK(b.detail == c.detail);
}

TEST_CASE("quick poisson suite passes" * doctest::timeout(600)) {
    const auto r = run_suite("poisson-exp1", quick());
    CHECK(r.pass);
}

TEST_CASE("quick reconstruct suite passes" * doctest::timeout(600)) {
    auto p = quick(200);
    const auto r = run_suite("mult-reconstruct-roundtrip", p);
    CHECK(r.pass);
}

TEST_CASE("report JSON carries the stable field names") {
    VerificationReport r;
    r.identity_name = "x";
    r.n = 5;
    r.statistic = 0.5;
    r.pass = true;
    const auto j = report_to_json(r);
    for (const char* key : {"identity_name", "n", "statistic", "threshold", "pass",
                            "unresolved_fraction", "seed", "runtime_ms"})
        CHECK(j.find(key) != std::string::npos);
}
