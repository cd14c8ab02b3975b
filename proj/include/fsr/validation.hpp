#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsr/fsr.hpp"
#include "fsr/oracle.hpp"

// Validation harnesses shared by `fsr validate` and the acceptance binary.
namespace fsr::validation {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::vector<std::string> lines;  ///< human-readable findings
  nlohmann::json details;
};

/// delta + 3 sqrt(delta (1 - delta) / T).
double fwer_band(double delta, std::size_t trials);

/// m = 2000, five binary columns. Exactly 600 ones placed uniformly for the
/// conditional null, i.i.d. Bern(0.3) labels for the unconditional one.
oracle::SyntheticSpec fwer_spec(TestingMode mode);

/// m = 5000; column 0 has five equiprobable values and label rate 0.9 on its
/// first value (0.1 elsewhere); four binary noise columns.
oracle::SyntheticSpec planted_spec();
Pattern planted_pattern();

/// m = 10^4, eight categorical columns with five equiprobable values each,
/// i.i.d. Bern(0.25) labels.
oracle::SyntheticSpec ordering_spec(std::uint64_t seed);

/// RunConfig with depth z and the defaults delta = 0.05, c = 10, p = 1000.
RunConfig suite_config(Method method, std::size_t depth);

/// Random small instances: sup_quality (parallel and serial), top_k and
/// patterns_above against the brute-force enumerator, exact equality.
SuiteResult oracle_suite(std::size_t instances, std::uint64_t seed);

/// Empirical FWER of `method` on its null (fwer_spec for its testing mode).
SuiteResult fwer_suite(Method method, std::size_t trials, std::uint64_t seed);

/// Fraction of planted_spec trials whose output contains planted_pattern().
SuiteResult power_suite(Method method, std::size_t trials, std::uint64_t seed, double required_rate);

/// m = 20, k = 10, three fixed covers; thresholds at the 0.5, 0.9 and 0.99
/// quantiles of the conditional sample.
SuiteResult coupling_suite(std::size_t samples, std::uint64_t seed);

}  // namespace fsr::validation
