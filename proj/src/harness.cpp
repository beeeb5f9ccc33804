#include "locklab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "locklab/asymptotics.hpp"
#include "locklab/errors.hpp"
#include "locklab/parallel.hpp"

namespace locklab::harness {
namespace {

constexpr double kFitFloor = 1e-14;

SweepRow compute_row(const FrequencyRule& rule, std::int64_t n, const SweepOptions& options) {
  SweepRow row;
  row.n = n;
  row.rule = rule.kind;
  try {
    row.gamma_exact = locking_threshold_exact(FrequencySpec{rule, n, 1.0}).gamma_l;
    row.gamma_predicted = asymptotics::predicted_threshold(rule, n);
    row.residual = row.gamma_predicted - row.gamma_exact;
    if (options.include_simulation && n <= options.max_simulated_n) {
      row.gamma_simulated = dynamics::threshold_bisect(rule, n, options.sim).gamma_l;
    }
  } catch (const std::exception& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.gamma_exact = nan;
    row.gamma_predicted = nan;
    row.residual = nan;
    row.gamma_simulated.reset();
    row.failure = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> sweep(const FrequencyRule& rule, std::vector<std::int64_t> n_values,
                            const SweepOptions& options) {
  if (n_values.empty()) throw DomainError("sweep: no N values");
  for (std::int64_t n : n_values) {
    if (n < 2) throw DomainError("sweep: every N must be >= 2");
  }
  if (options.include_simulation) dynamics::validate(options.sim);
  std::sort(n_values.begin(), n_values.end());
  n_values.erase(std::unique(n_values.begin(), n_values.end()), n_values.end());

  std::vector<SweepRow> rows(n_values.size());
  const long long count = static_cast<long long>(n_values.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count()) if (count > 1)
  for (long long i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(i);
    rows[j] = compute_row(rule, n_values[j], options);
  }
  return rows;
}

std::vector<std::int64_t> geometric_ladder(std::int64_t min, std::int64_t max, std::int64_t factor) {
  if (min < 2) throw DomainError("geometric ladder: min must be >= 2");
  if (factor < 2) throw DomainError("geometric ladder: factor must be >= 2");
  if (max < min) throw DomainError("geometric ladder: max must be >= min");
  std::vector<std::int64_t> out;
  for (std::int64_t n = min; n <= max; n *= factor) {
    out.push_back(n);
    if (n > max / factor) break;
  }
  return out;
}

std::vector<std::int64_t> parse_geometric_ladder(const std::string& text) {
  std::int64_t parts[3];
  std::istringstream in(text);
  for (int i = 0; i < 3; ++i) {
    std::string field;
    if (!std::getline(in, field, ':') || field.empty()) {
      throw DomainError("geometric ladder '" + text + "' is not min:max:factor");
    }
    std::size_t used = 0;
    try {
      parts[i] = std::stoll(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != field.size()) {
      throw DomainError("geometric ladder '" + text + "' has a non-integer field '" + field + "'");
    }
  }
  std::string rest;
  if (std::getline(in, rest)) throw DomainError("geometric ladder '" + text + "' has extra fields");
  return geometric_ladder(parts[0], parts[1], parts[2]);
}

ScalingFit fit_power_law(const std::vector<std::pair<std::int64_t, double>>& pairs) {
  ScalingFit fit;
  std::vector<double> xs;
  std::vector<double> ys;  // |y|
  for (const auto& [n, y] : pairs) {
    if (n < 1 || !std::isfinite(y) || std::fabs(y) < kFitFloor) {
      ++fit.excluded;
      continue;
    }
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::fabs(y));
    fit.n_min = fit.used == 0 ? n : std::min(fit.n_min, n);
    fit.n_max = fit.used == 0 ? n : std::max(fit.n_max, n);
    ++fit.used;
  }
  if (fit.used < 3) {
    std::ostringstream msg;
    msg << "fit_power_law: need at least 3 usable pairs, have " << fit.used;
    throw DomainError(msg.str());
  }

  // Logs are taken relative to the first |y| so that rescaling y by a power
  // of two leaves the slope bit-identical.
  const std::size_t m = xs.size();
  std::vector<double> ly(m);
  for (std::size_t i = 0; i < m; ++i) ly[i] = std::log(ys[i] / ys[0]);

  double x_bar = 0.0;
  double y_bar = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    x_bar += xs[i];
    y_bar += ly[i];
  }
  x_bar /= static_cast<double>(m);
  y_bar /= static_cast<double>(m);

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = xs[i] - x_bar;
    const double dy = ly[i] - y_bar;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DomainError("fit_power_law: all usable pairs share one n");

  fit.exponent = sxy / sxx;
  fit.log_prefactor = std::log(ys[0]) + y_bar - fit.exponent * x_bar;

  double ss_res = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ly[i] - y_bar - fit.exponent * (xs[i] - x_bar);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

std::vector<std::pair<std::int64_t, double>> prefactor_extract(RuleKind rule,
                                                               const std::vector<std::int64_t>& n_values) {
  if (rule != RuleKind::midpoint && rule != RuleKind::endpoint) {
    throw DomainError("prefactor_extract: only the midpoint and endpoint rules have this expansion");
  }
  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(n_values.size());
  for (std::int64_t n : n_values) {
    if (n < 2) throw DomainError("prefactor_extract: every N must be >= 2");
    const double nd = static_cast<double>(n);
    const double gamma = locking_threshold_exact(FrequencySpec{FrequencyRule{rule}, n, 1.0}).gamma_l;
    double leading = std::numbers::pi / 4.0;
    if (rule == RuleKind::endpoint) leading -= (std::numbers::pi / 4.0) / nd;
    out.emplace_back(n, (gamma - leading) * std::pow(nd, 1.5));
  }
  return out;
}

}  // namespace locklab::harness
