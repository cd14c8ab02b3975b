#include "fsr/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace fsr {
namespace {

double checked_sqrt(double radicand, const char* what) {
  if (!(radicand >= 0.0)) throw BoundError(std::string("negative radicand in ") + what);
  return std::sqrt(radicand);
}

void check_counts(std::size_t m, std::size_t c) {
  if (m < 1) throw BoundError("m must be >= 1");
  if (c < 1) throw BoundError("c must be >= 1");
}

// d^ and epsilon from an upper bound r^ on the expected supremum deviation.
UnconditionalBound deviation_chain(double r_hat, double nu_T, double nu, std::size_t m, double delta) {
  const double md = static_cast<double>(m);
  const double log_term = std::log(4.0 / delta);
  const double r = std::max(r_hat, 0.0);
  const double a = 2.0 * nu_T * log_term / md;
  const double d_hat = r + checked_sqrt(a * a + 2.0 * r * log_term / md, "d_hat") + a;
  const double epsilon =
      d_hat + checked_sqrt(2.0 * log_term * (nu + 2.0 * d_hat) / md, "epsilon") + log_term / (3.0 * md);
  return {r_hat, d_hat, epsilon};
}

}  // namespace

std::string to_string(TestingMode mode) {
  return mode == TestingMode::conditional ? "conditional" : "unconditional";
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw BoundError("delta must lie in (0, 1)");
}

double bound_target(TestingMode mode, double mu_D, std::size_t m, double delta) {
  check_delta(delta);
  if (m < 1) throw BoundError("m must be >= 1");
  if (!(mu_D >= 0.0 && mu_D <= 1.0)) throw BoundError("mean target must lie in [0, 1]");
  if (mode == TestingMode::conditional) return 0.0;
  const double md = static_cast<double>(m);
  const double log_term = std::log(8.0 / delta);
  return std::sqrt(2.0 * std::min(mu_D, 0.25) * log_term / md) + 2.0 * log_term / md;
}

TargetBrackets target_brackets(double mu_D, double eps_T) {
  return {std::min(mu_D + eps_T, 1.0), std::max(mu_D - eps_T, 0.0)};
}

double omega(double mu_D, double sup_freq) { return (1.0 - mu_D) * std::min(mu_D, sup_freq); }

double omega(const Dataset& d, double sup_freq) { return omega(mean_target(d), sup_freq); }

double resampling_addend(std::size_t m, std::size_t c, double delta) {
  check_delta(delta);
  check_counts(m, c);
  return std::sqrt(std::log(4.0 / delta) / (2.0 * static_cast<double>(c) * static_cast<double>(m)));
}

double bound_statistic_conditional(double d_tilde, double omega, std::size_t m, std::size_t c, double delta) {
  check_delta(delta);
  check_counts(m, c);
  const double log_term = std::log(4.0 / delta);
  return d_tilde + checked_sqrt(2.0 * omega * log_term / static_cast<double>(m), "omega term") +
         resampling_addend(m, c, delta);
}

NuPlugin nu_plugin(double mu_D, double eps_T) {
  if (!(eps_T >= 0.0)) throw BoundError("eps_T must be nonnegative");
  const double lo = std::max(0.0, mu_D - eps_T);
  const double hi = std::min(1.0, mu_D + eps_T);
  double x = 0.5;
  if (hi < 0.5) x = hi;
  if (lo > 0.5) x = lo;
  const double v = x * (1.0 - x);
  return {v, v};
}

UnconditionalBound bound_statistic_unconditional(double d_tilde, double nu_T, double nu, std::size_t m,
                                                 std::size_t c, double delta) {
  check_delta(delta);
  check_counts(m, c);
  return deviation_chain(d_tilde + resampling_addend(m, c, delta), nu_T, nu, m, delta);
}

UnconditionalBound bound_statistic_ub(double n_hat_log, double nu_T, double nu, std::size_t m, double delta) {
  check_delta(delta);
  check_counts(m, 1);
  if (!(n_hat_log >= 0.0)) throw BoundError("ln N^ must be >= 0");
  const double r_hat = std::sqrt((n_hat_log + std::log(4.0 / delta)) / (2.0 * static_cast<double>(m)));
  return deviation_chain(r_hat, nu_T, nu, m, delta);
}

}  // namespace fsr
