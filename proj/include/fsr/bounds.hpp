#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsr/data.hpp"

namespace fsr {

class BoundError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TestingMode { conditional, unconditional };

std::string to_string(TestingMode mode);

/// Every intermediate quantity of one bound computation, kept for audit.
/// Mode-specific entries are empty when they do not apply.
struct BoundReport {
  std::string method;  ///< fsr-c, fsr-u, fsr-u-ub or wy
  TestingMode mode = TestingMode::conditional;
  double delta = 0.05;
  std::size_t m = 0;
  std::size_t c = 0;
  double mu_D = 0.0;
  double mu_hat = 0.0;
  double mu_check = 0.0;
  double eps_T = 0.0;
  double d_tilde = 0.0;
  std::vector<double> d_values;
  std::optional<double> omega;
  std::optional<double> nu;
  std::optional<double> nu_T;
  std::optional<double> r_hat;
  std::optional<double> d_hat;
  std::optional<double> n_hat_log;
  std::string nu_source;  ///< how nu / nu_T were obtained ("plugin")
  double epsilon = 0.0;
  double sup_freq = 0.0;

  /// Significance threshold for a pattern of frequency f: epsilon + eps_T * f.
  double threshold(double frequency) const { return epsilon + eps_T * frequency; }

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

/// Deviation allowance on the mean target: 0 when conditioning on mu(D),
/// otherwise sqrt(2 min{mu, 1/4} ln(8/delta) / m) + 2 ln(8/delta) / m.
double bound_target(TestingMode mode, double mu_D, std::size_t m, double delta);

struct TargetBrackets {
  double mu_hat;    ///< min(mu + eps_T, 1)
  double mu_check;  ///< max(mu - eps_T, 0)
};
TargetBrackets target_brackets(double mu_D, double eps_T);

/// (1 - mu) * min(mu, sup_freq).
double omega(double mu_D, double sup_freq);
double omega(const Dataset& d, double sup_freq);

/// d~ + sqrt(2 omega ln(4/delta) / m) + sqrt(ln(4/delta) / (2 c m)).
double bound_statistic_conditional(double d_tilde, double omega, std::size_t m, std::size_t c, double delta);

/// The resampling addend sqrt(ln(4/delta) / (2 c m)) shared by both modes.
double resampling_addend(std::size_t m, std::size_t c, double delta);

struct NuPlugin {
  double nu_T;
  double nu;
};
/// sup of x(1 - x) over |x - mu| <= eps_T, x in [0, 1]; used for both nu_T and nu.
NuPlugin nu_plugin(double mu_D, double eps_T);

struct UnconditionalBound {
  double r_hat;
  double d_hat;
  double epsilon;
};

/// r^ = d~ + sqrt(ln(4/delta)/(2cm)), then d^ and epsilon by the
/// self-bounding chain. r^ is floored at 0 before d^ is formed.
UnconditionalBound bound_statistic_unconditional(double d_tilde, double nu_T, double nu, std::size_t m,
                                                 std::size_t c, double delta);

/// Resample-free variant: r^ = sqrt(ln(4 N^ / delta) / (2m)) from a union bound
/// over N^ distinct projections; same d^ / epsilon chain.
UnconditionalBound bound_statistic_ub(double n_hat_log, double nu_T, double nu, std::size_t m, double delta);

void check_delta(double delta);

}  // namespace fsr
