#pragma once

// Exact finite-N locking threshold for evenly spaced natural frequencies.
//
// At the saddle-node the maximal phase satisfies
//   2 <sqrt(1 - nu_j^2 s^2)> = <1 / sqrt(1 - nu_j^2 s^2)>,   s = sin(theta_N),
// where nu_j = omega_j / omega_N. With K = 1 the order parameter is
// r = <1 / sqrt(1 - nu_j^2 s^2)> / 2 and the maximal frequency is r s.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locklab/parallel.hpp"

namespace locklab {

enum class RuleKind { midpoint, endpoint, sigma_beta, zeta_corrected };

/// Deterministic placement rule for the natural frequencies. `sigma` and
/// `beta` are read only by the sigma-beta family.
struct FrequencyRule {
  RuleKind kind = RuleKind::midpoint;
  double sigma = 0.0;
  double beta = 0.0;

  static FrequencyRule midpoint() { return {RuleKind::midpoint}; }
  static FrequencyRule endpoint() { return {RuleKind::endpoint}; }
  static FrequencyRule zeta_corrected() { return {RuleKind::zeta_corrected}; }
  static FrequencyRule sigma_beta(double sigma, double beta) {
    return {RuleKind::sigma_beta, sigma, beta};
  }
};

std::string_view rule_name(RuleKind kind);

/// Parses "midpoint", "endpoint", "sigma-beta" or "zeta-corrected".
RuleKind parse_rule(std::string_view name);

struct FrequencySpec {
  FrequencyRule rule;
  std::int64_t n = 2;
  double gamma = 1.0;  // half-width of the frequency interval
};

/// Throws DomainError unless n >= 2, gamma > 0 and, for sigma-beta,
/// 0 < sigma < 3/2 and beta != 0.
void validate(const FrequencySpec& spec);

/// Coefficient of gamma in omega_N for the rule at size n: 1 - 1/n for
/// midpoint, 1 for endpoint, (1 - beta n^-sigma)(1 - 1/n) for sigma-beta and
/// 1 - 1/n + (16/pi) zeta(-1/2, c1/2) n^-3/2 for the zeta-corrected family.
/// Throws DomainError when it is not positive.
double gamma_scale(const FrequencyRule& rule, std::int64_t n);

/// omega_1 < ... < omega_N.
std::vector<double> make_frequencies(const FrequencySpec& spec);

/// nu_j = omega_j / omega_N in ascending order, with max nu = 1.
///
/// Averages over nu depend on nu^2 only. When the list is exactly
/// antisymmetric (nu_j == -nu_{N-1-j} bitwise) they are taken over the
/// unique magnitudes with weight 2, plus the middle term for odd N.
class NormalizedFrequencies {
 public:
  /// Validates |nu_j| <= 1 and non-empty.
  explicit NormalizedFrequencies(std::vector<double> values);

  /// nu_k = (2k - (N - 1)) / (N - 1), shared by every rule here.
  static NormalizedFrequencies evenly_spaced(std::int64_t n);

  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] bool symmetric() const { return symmetric_; }
  [[nodiscard]] double max_abs() const { return max_abs_; }

  /// (1/N) sum_j f(nu_j^2), reduced on the fixed pairwise tree.
  template <class F>
  double average_of_square(F&& f) const {
    const double* sq = squares_.data();
    const double* w = weights_.data();
    const double total =
        pairwise_sum(squares_.size(), [&](std::size_t i) { return w[i] * f(sq[i]); });
    return total / static_cast<double>(values_.size());
  }

 private:
  std::vector<double> values_;
  std::vector<double> squares_;  // nu^2 over the summation support
  std::vector<double> weights_;  // 1 or 2
  bool symmetric_ = false;
  double max_abs_ = 0.0;
};

/// Throws DomainError when omega_N would be zero or negative.
NormalizedFrequencies normalized(const FrequencySpec& spec);

struct SolverOptions {
  double residual_tol = 1e-13;
  int max_iterations = 200;
};

/// G(s) = 2 <sqrt(1 - nu^2 s^2)> - <1 / sqrt(1 - nu^2 s^2)>, G(0) = 1.
/// Throws DomainError unless 0 <= s < 1.
double lock_margin(const NormalizedFrequencies& nu, double s);

/// G'(s) = -s <nu^2 (2 / w + 1 / w^3)>, w = sqrt(1 - nu^2 s^2).
double lock_margin_derivative(const NormalizedFrequencies& nu, double s);

struct MaxPhaseRoot {
  double sin_theta;
  double residual;  // G at the returned root
  int iterations;
};

/// Root of lock_margin in (0, 1): bisection on [0, 1 - 2^-40] until the
/// bracket is narrower than 1e-6, then Newton kept inside the bracket.
/// Requires max |nu| == 1. Throws ConvergenceError when |G| stays above
/// the tolerance after the iteration budget or the bracket collapses.
MaxPhaseRoot solve_sin_theta_max(const NormalizedFrequencies& nu,
                                 const SolverOptions& options = {});

/// r = <1 / sqrt(1 - nu^2 s^2)> / 2.
double order_param_at_threshold(const NormalizedFrequencies& nu, double s);

/// <sqrt(1 - nu^2 s^2)>, the self-consistent order parameter <cos theta_j>.
double mean_cos_at(const NormalizedFrequencies& nu, double s);

struct LockingSolution {
  double sin_theta_max;
  double r;
  double omega_max;  // r * sin_theta_max
  double gamma_l;
  double residual;
};

LockingSolution locking_threshold_exact(const FrequencySpec& spec,
                                        const SolverOptions& options = {});

}  // namespace locklab
