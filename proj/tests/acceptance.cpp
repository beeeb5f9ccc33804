// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "locklab/asymptotics.hpp"
#include "locklab/dynamics.hpp"
#include "locklab/harness.hpp"
#include "locklab/locking.hpp"
#include "locklab/specfun.hpp"

using namespace locklab;

namespace {

constexpr double kPi4 = std::numbers::pi / 4.0;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double gamma_exact(const FrequencyRule& rule, std::int64_t n) {
  return locking_threshold_exact({rule, n, 1.0}).gamma_l;
}

double excess_slope(const FrequencyRule& rule, std::int64_t lo, std::int64_t hi) {
  std::vector<std::pair<std::int64_t, double>> pairs;
  for (const auto& row : harness::sweep(rule, harness::geometric_ladder(lo, hi, 2))) {
    pairs.emplace_back(row.n, row.gamma_exact - kPi4);
  }
  return harness::fit_power_law(pairs).exponent;
}

bool decreasing_to_zero(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return v.back() < 0.5 * v.front();
}

bool non_growing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > 1.2 * v[i - 1]) return false;
  }
  return true;
}

Verdict constants() {
  const auto start = std::chrono::steady_clock::now();
  const specfun::QrsConstants k = specfun::compute_qrs_constants();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool c1_ok = std::fabs(k.c1 - 0.605443657) <= 0.5e-9;
  const bool c2_ok = std::fabs(k.c2 - (-0.104)) < 1e-3;
  const bool pre_ok = std::fabs(k.prefactor() - 0.3735) <= 0.5e-4;
  return {c1_ok && c2_ok && pre_ok && seconds < 1.0,
          fmt("c1=%.12f c2=%.12f 4zeta=%.10f in %.3fs", k.c1, k.c2, k.prefactor(), seconds)};
}

Verdict infinite_limit() {
  const std::int64_t n = 1'000'000;
  const double g = gamma_exact(FrequencyRule::midpoint(), n);
  const double pred = asymptotics::predict_gamma(RuleKind::midpoint, n).gamma_l;
  const double remainder = std::fabs(g - pred);
  return {remainder <= 1e-11,
          fmt("gamma_L=%.15f |gamma_L - prediction|=%.3e", g, remainder)};
}

Verdict midpoint_exponent() {
  const double slope = excess_slope(FrequencyRule::midpoint(), 16, 16384);
  return {slope >= -1.52 && slope <= -1.48, fmt("slope=%.6f over N=2^4..2^14", slope)};
}

Verdict endpoint_exponent() {
  const double slope = excess_slope(FrequencyRule::endpoint(), 16, 16384);
  return {slope >= -1.02 && slope <= -0.98, fmt("slope=%.6f over N=2^4..2^14", slope)};
}

Verdict residual_slope() {
  std::vector<std::pair<std::int64_t, double>> pairs;
  for (const auto& row : harness::sweep(FrequencyRule::midpoint(), harness::geometric_ladder(64, 8192, 2))) {
    pairs.emplace_back(row.n, row.residual);
  }
  const double slope = harness::fit_power_law(pairs).exponent;
  return {slope >= -2.8 && slope <= -2.2, fmt("slope=%.6f over N=2^6..2^13", slope)};
}

Verdict desk_checks() {
  const double mid2 = gamma_exact(FrequencyRule::midpoint(), 2);
  const double end2 = gamma_exact(FrequencyRule::endpoint(), 2);
  const double c = (-1.0 + std::sqrt(33.0)) / 8.0;
  const double mid3_closed = (2.0 / c + 1.0) / 6.0 * std::sqrt(1.0 - c * c) * 1.5;
  const double mid3 = gamma_exact(FrequencyRule::midpoint(), 3);
  const bool ok = std::fabs(mid2 - 1.0) <= 1e-13 && std::fabs(end2 - 0.5) <= 1e-13 &&
                  std::fabs(mid3 - mid3_closed) <= 1e-12;
  return {ok, fmt("N=2 midpoint %.3e, N=2 endpoint %.3e, N=3 midpoint %.3e off", mid2 - 1.0, end2 - 0.5,
                  mid3 - mid3_closed)};
}

Verdict bulk_fringe() {
  std::vector<double> bulk;
  std::vector<double> fringe;
  for (std::int64_t m : {100, 1000, 10000}) {
    const auto d = asymptotics::decompose(asymptotics::mesh_context(m + 1, asymptotics::SMode::asymptotic));
    const double m2 = static_cast<double>(m) * static_cast<double>(m);
    bulk.push_back(std::fabs(d.bulk_sum - d.bulk_closed) * m2);
    fringe.push_back(std::fabs(d.fringe_sum - d.fringe_closed) * m2);
  }
  return {non_growing(bulk) && non_growing(fringe),
          fmt("bulk*M^2 = %.4f %.4f %.4f, fringe*M^2 = %.4f %.4f %.4f", bulk[0], bulk[1], bulk[2], fringe[0],
              fringe[1], fringe[2])};
}

Verdict simulation() {
  harness::SweepOptions options;
  options.include_simulation = true;
  options.max_simulated_n = 16;
  double worst = 0.0;
  bool ok = true;
  std::string where;
  for (const auto& rule : {FrequencyRule::midpoint(), FrequencyRule::endpoint()}) {
    for (const auto& row : harness::sweep(rule, {2, 3, 4, 8, 16}, options)) {
      if (row.failure || !row.gamma_simulated) {
        ok = false;
        continue;
      }
      const double gap = std::fabs(*row.gamma_simulated - row.gamma_exact);
      if (gap > worst) {
        worst = gap;
        where = fmt("%s N=%lld", std::string(rule_name(row.rule)).c_str(), static_cast<long long>(row.n));
      }
    }
  }
  return {ok && worst <= 2e-3, fmt("worst |bisect - exact| = %.3e at %s", worst, where.c_str())};
}

Verdict sin_theta_expansion() {
  // (1 - s) N = c1 + c2 / N, least squares in x = 1/N.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const std::vector<std::int64_t> ns = {1000, 10000, 100000};
  for (auto n : ns) {
    const double s = solve_sin_theta_max(NormalizedFrequencies::evenly_spaced(n)).sin_theta;
    const double x = 1.0 / static_cast<double>(n);
    const double y = (1.0 - s) * static_cast<double>(n);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double count = static_cast<double>(ns.size());
  const double c2 = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double c1 = (sy - c2 * sx) / count;
  const auto& k = specfun::qrs_constants();
  const double e1 = std::fabs(c1 - k.c1) / k.c1;
  const double e2 = std::fabs(c2 - k.c2) / std::fabs(k.c2);
  return {e1 <= 1e-6 && e2 <= 1e-2, fmt("fit c1=%.10f (rel %.2e) c2=%.6f (rel %.2e)", c1, e1, c2, e2)};
}

Verdict discussion() {
  std::vector<double> sb;
  std::vector<double> zc;
  for (std::int64_t n : {100, 1000, 10000}) {
    const double nd = static_cast<double>(n);
    sb.push_back(std::fabs(gamma_exact(FrequencyRule::sigma_beta(1.0, 1.0), n) - (kPi4 + kPi4 / nd)) * nd);
    zc.push_back(std::fabs(gamma_exact(FrequencyRule::zeta_corrected(), n) - kPi4) * std::pow(nd, 1.5));
  }
  return {decreasing_to_zero(sb) && decreasing_to_zero(zc),
          fmt("sigma-beta*N = %.3e %.3e %.3e, zeta-corrected*N^1.5 = %.3e %.3e %.3e", sb[0], sb[1], sb[2], zc[0],
              zc[1], zc[2])};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"constants", constants},
      {"infinite-N limit", infinite_limit},
      {"midpoint exponent", midpoint_exponent},
      {"endpoint exponent", endpoint_exponent},
      {"residual slope", residual_slope},
      {"closed-form desk checks", desk_checks},
      {"bulk/fringe consistency", bulk_fringe},
      {"simulation agreement", simulation},
      {"large-N expansion of sin(theta)", sin_theta_expansion},
      {"discussion families", discussion},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("%s AC%-2d %-32s %s [%.2fs]\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
