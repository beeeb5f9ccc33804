#include "locklab/locking.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "locklab/errors.hpp"
#include "locklab/specfun.hpp"

namespace locklab {
namespace {

// Upper end of the initial bracket, 1 - 2^-40.
constexpr double kBracketTop = 1.0 - 0x1p-40;
constexpr double kNewtonHandoff = 1e-6;

void check_s(double s, const char* who) {
  if (!(s >= 0.0 && s < 1.0)) {
    std::ostringstream msg;
    msg << who << ": need 0 <= s < 1, got " << s;
    throw DomainError(msg.str());
  }
}

// (2k - (n - 1)) / (n - 1): the integer numerator makes the list exactly
// antisymmetric.
double even_grid(std::int64_t k, std::int64_t n) {
  return static_cast<double>(2 * k - (n - 1)) / static_cast<double>(n - 1);
}

}  // namespace

std::string_view rule_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::midpoint: return "midpoint";
    case RuleKind::endpoint: return "endpoint";
    case RuleKind::sigma_beta: return "sigma-beta";
    case RuleKind::zeta_corrected: return "zeta-corrected";
  }
  return "unknown";
}

RuleKind parse_rule(std::string_view name) {
  if (name == "midpoint") return RuleKind::midpoint;
  if (name == "endpoint") return RuleKind::endpoint;
  if (name == "sigma-beta") return RuleKind::sigma_beta;
  if (name == "zeta-corrected") return RuleKind::zeta_corrected;
  throw DomainError("unknown frequency rule '" + std::string(name) + "'");
}

void validate(const FrequencySpec& spec) {
  if (spec.n < 2) throw DomainError("frequency rule needs n >= 2");
  if (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma)) {
    throw DomainError("frequency rule needs a finite gamma > 0");
  }
  if (spec.rule.kind == RuleKind::sigma_beta) {
    if (!(spec.rule.sigma > 0.0 && spec.rule.sigma < 1.5)) {
      throw DomainError("sigma-beta rule needs 0 < sigma < 3/2");
    }
    if (spec.rule.beta == 0.0 || !std::isfinite(spec.rule.beta)) {
      throw DomainError("sigma-beta rule needs a finite beta != 0");
    }
  }
}

double gamma_scale(const FrequencyRule& rule, std::int64_t n) {
  if (n < 2) throw DomainError("gamma_scale: need n >= 2");
  const double nd = static_cast<double>(n);
  const double inner = static_cast<double>(n - 1) / nd;
  double scale = 0.0;
  switch (rule.kind) {
    case RuleKind::midpoint:
      scale = inner;
      break;
    case RuleKind::endpoint:
      scale = 1.0;
      break;
    case RuleKind::sigma_beta:
      scale = (1.0 - rule.beta * std::pow(nd, -rule.sigma)) * inner;
      break;
    case RuleKind::zeta_corrected: {
      const double zeta = specfun::qrs_constants().zeta_neg_half_at_c1;
      scale = inner + (16.0 / std::numbers::pi) * zeta * std::pow(nd, -1.5);
      break;
    }
  }
  if (!(scale > 0.0)) {
    std::ostringstream msg;
    msg << rule_name(rule.kind) << " rule at n=" << n
        << " gives a non-positive maximal frequency (scale " << scale << ")";
    throw DomainError(msg.str());
  }
  return scale;
}

std::vector<double> make_frequencies(const FrequencySpec& spec) {
  validate(spec);
  const std::int64_t n = spec.n;
  const double nd = static_cast<double>(n);
  std::vector<double> omega(static_cast<std::size_t>(n));
  switch (spec.rule.kind) {
    case RuleKind::midpoint:
      // gamma (-1 + (2j - 1)/N), j = 1..N
      for (std::int64_t j = 1; j <= n; ++j) {
        omega[static_cast<std::size_t>(j - 1)] = spec.gamma * static_cast<double>(2 * j - 1 - n) / nd;
      }
      break;
    case RuleKind::endpoint:
      for (std::int64_t k = 0; k < n; ++k) {
        omega[static_cast<std::size_t>(k)] = spec.gamma * even_grid(k, n);
      }
      break;
    case RuleKind::sigma_beta:
    case RuleKind::zeta_corrected: {
      const double top = spec.gamma * gamma_scale(spec.rule, n);
      for (std::int64_t k = 0; k < n; ++k) {
        omega[static_cast<std::size_t>(k)] = top * even_grid(k, n);
      }
      break;
    }
  }
  return omega;
}

NormalizedFrequencies::NormalizedFrequencies(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("normalized frequencies: empty list");
  for (double v : values_) {
    if (!(std::fabs(v) <= 1.0)) {
      throw DomainError("normalized frequencies must satisfy |nu| <= 1");
    }
    max_abs_ = std::max(max_abs_, std::fabs(v));
  }

  const std::size_t n = values_.size();
  symmetric_ = true;
  for (std::size_t j = 0; j < n / 2 && symmetric_; ++j) {
    symmetric_ = values_[j] == -values_[n - 1 - j];
  }
  if (n % 2 == 1 && values_[n / 2] != 0.0) symmetric_ = false;

  if (symmetric_) {
    const std::size_t half = n / 2;
    squares_.reserve(half + 1);
    for (std::size_t j = 0; j < half; ++j) {
      squares_.push_back(values_[j] * values_[j]);
      weights_.push_back(2.0);
    }
    if (n % 2 == 1) {
      squares_.push_back(0.0);
      weights_.push_back(1.0);
    }
  } else {
    squares_.reserve(n);
    for (double v : values_) {
      squares_.push_back(v * v);
      weights_.push_back(1.0);
    }
  }
}

NormalizedFrequencies NormalizedFrequencies::evenly_spaced(std::int64_t n) {
  if (n < 2) throw DomainError("evenly_spaced: need n >= 2");
  std::vector<double> nu(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) nu[static_cast<std::size_t>(k)] = even_grid(k, n);
  return NormalizedFrequencies(std::move(nu));
}

NormalizedFrequencies normalized(const FrequencySpec& spec) {
  validate(spec);
  // omega_N > 0 check; every rule shares the even grid once divided by it.
  gamma_scale(spec.rule, spec.n);
  return NormalizedFrequencies::evenly_spaced(spec.n);
}

double lock_margin(const NormalizedFrequencies& nu, double s) {
  check_s(s, "lock_margin");
  const double s2 = s * s;
  return nu.average_of_square([s2](double v2) {
    const double w = std::sqrt(1.0 - v2 * s2);
    return 2.0 * w - 1.0 / w;
  });
}

double lock_margin_derivative(const NormalizedFrequencies& nu, double s) {
  check_s(s, "lock_margin_derivative");
  const double s2 = s * s;
  return -s * nu.average_of_square([s2](double v2) {
    const double w = std::sqrt(1.0 - v2 * s2);
    return v2 * (2.0 / w + 1.0 / (w * w * w));
  });
}

double order_param_at_threshold(const NormalizedFrequencies& nu, double s) {
  check_s(s, "order_param_at_threshold");
  const double s2 = s * s;
  return 0.5 * nu.average_of_square([s2](double v2) { return 1.0 / std::sqrt(1.0 - v2 * s2); });
}

double mean_cos_at(const NormalizedFrequencies& nu, double s) {
  check_s(s, "mean_cos_at");
  const double s2 = s * s;
  return nu.average_of_square([s2](double v2) { return std::sqrt(1.0 - v2 * s2); });
}

MaxPhaseRoot solve_sin_theta_max(const NormalizedFrequencies& nu, const SolverOptions& options) {
  if (nu.max_abs() != 1.0) {
    throw DomainError("solve_sin_theta_max: needs an entry with |nu| = 1");
  }
  double lo = 0.0;  // G(0) = 1
  double hi = kBracketTop;
  double g_lo = 1.0;
  double g_hi = lock_margin(nu, hi);
  if (!(g_hi < 0.0)) {
    throw ConvergenceError("solve_sin_theta_max: no sign change on [0, 1 - 2^-40]");
  }

  int it = 0;
  while (hi - lo >= kNewtonHandoff) {
    if (++it > options.max_iterations) break;
    const double mid = 0.5 * (lo + hi);
    const double g = lock_margin(nu, mid);
    if (g == 0.0) return {mid, g, it};
    if (g > 0.0) {
      lo = mid;
      g_lo = g;
    } else {
      hi = mid;
      g_hi = g;
    }
  }

  double s = 0.5 * (lo + hi);
  double g = lock_margin(nu, s);
  while (it < options.max_iterations) {
    ++it;
    if (std::fabs(g) <= options.residual_tol) return {s, g, it};
    if (g > 0.0) {
      lo = s;
      g_lo = g;
    } else {
      hi = s;
      g_hi = g;
    }
    if (std::nextafter(lo, hi) >= hi) break;
    double next = s - g / lock_margin_derivative(nu, s);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == s) next = 0.5 * (lo + hi);
    s = next;
    g = lock_margin(nu, s);
  }

  // Bracket down to adjacent doubles, or out of budget: keep the better end.
  MaxPhaseRoot best{s, g, it};
  if (std::fabs(g_lo) < std::fabs(best.residual)) best = {lo, g_lo, it};
  if (std::fabs(g_hi) < std::fabs(best.residual)) best = {hi, g_hi, it};
  if (std::fabs(best.residual) <= options.residual_tol) return best;

  std::ostringstream msg;
  msg.precision(17);
  msg << "solve_sin_theta_max: residual " << best.residual << " above tolerance "
      << options.residual_tol << " after " << it << " iterations (s=" << best.sin_theta << ")";
  throw ConvergenceError(msg.str());
}

LockingSolution locking_threshold_exact(const FrequencySpec& spec, const SolverOptions& options) {
  const NormalizedFrequencies nu = normalized(spec);
  const MaxPhaseRoot root = solve_sin_theta_max(nu, options);
  LockingSolution out{};
  out.sin_theta_max = root.sin_theta;
  out.residual = root.residual;
  out.r = order_param_at_threshold(nu, root.sin_theta);
  out.omega_max = out.r * out.sin_theta_max;
  out.gamma_l = out.omega_max / gamma_scale(spec.rule, spec.n);
  return out;
}

}  // namespace locklab
