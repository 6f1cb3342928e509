#ifndef MAXMART_SUITES_HPP_
#define MAXMART_SUITES_HPP_

#include <string>
#include <vector>

#include "maxmart/mc_engine.hpp"

namespace maxmart {

struct SuiteParams {
    std::uint64_t n_paths = 100000;
    double step = 1e-3;
    double horizon = 0.0;  // 0 = suite default
    std::uint64_t seed = 42;
    unsigned workers = 0;  // 0 = hardware concurrency
    std::string generator;     // optional; must match the suite's generator
    std::string dump_samples;  // optional CSV of the per-path scalars
};

struct SuiteInfo {
    std::string name;
    std::string description;  // the verified identity, in formula form
    std::string generator;
    std::uint64_t min_n;
};

// Sorted by name.
const std::vector<SuiteInfo>& suite_registry();
const SuiteInfo* find_suite(const std::string& name);

// Validates params against the suite requirements (throws std::invalid_argument
// on config errors: unknown suite, generator mismatch, n below the minimum).
void validate_suite_params(const std::string& name, const SuiteParams& p);

VerificationReport run_suite(const std::string& name, const SuiteParams& p);

// Per-path random-time records of a grid batch (columns
// path_id,g,rho,t0,s_end,r_rho; indices, -1 when not attained).
void dump_random_times_csv(const std::string& generator, const SuiteParams& p,
                           const std::string& file);

}  // namespace maxmart

#endif  // MAXMART_SUITES_HPP_
