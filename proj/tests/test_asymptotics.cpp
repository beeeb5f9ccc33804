#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "locklab/asymptotics.hpp"
#include "locklab/errors.hpp"
#include "locklab/locking.hpp"
#include "locklab/specfun.hpp"

using namespace locklab;
using namespace locklab::asymptotics;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi4 = kPi / 4.0;
constexpr double kPrefactor = 4.0 * 0.093366390942222727264;

double gamma_exact(const FrequencyRule& rule, std::int64_t n) {
  return locking_threshold_exact({rule, n, 1.0}).gamma_l;
}

// Each entry at most 1.2x the previous one.
bool non_growing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > 1.2 * v[i - 1]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("mesh examples") {
  const MeshContext two = mesh_context(2, SMode::exact);
  CHECK(two.m == 1);
  CHECK(std::fabs(two.s_m - std::sqrt(0.5)) <= 1e-15);
  CHECK(std::fabs(two.delta_u - std::sqrt(2.0)) <= 1e-15);
  CHECK(std::fabs(two.u(0) + two.s_m) <= 1e-15);
  CHECK(two.u(1) == two.s_m);

  const auto& c = specfun::qrs_constants();
  const MeshContext big = mesh_context(10001, SMode::asymptotic);
  const double m = 10000.0;
  CHECK(big.s_m == doctest::Approx(1.0 - c.c1 / m - (c.c2 - c.c1) / (m * m)).epsilon(1e-16));
  CHECK_THROWS_AS(mesh_context(1, SMode::exact), DomainError);
}

TEST_CASE("mesh nodes are antisymmetric and evenly spaced") {
  for (std::int64_t n : {2, 3, 11, 1000}) {
    const MeshContext ctx = mesh_context(n, SMode::exact);
    for (std::int64_t k = 0; k <= ctx.m; ++k) {
      CHECK(ctx.u(k) == -ctx.u(ctx.m - k));
      CHECK(ctx.u(k) * ctx.u(k) == ctx.u(ctx.m - k) * ctx.u(ctx.m - k));
      CHECK(std::fabs(ctx.u(k) - (-ctx.s_m + static_cast<double>(k) * ctx.delta_u)) <= 1e-15);
    }
  }
}

TEST_CASE("exact and asymptotic meshes differ at third order") {
  std::vector<double> scaled;
  for (std::int64_t m : {1000, 10000, 100000}) {
    const double gap = mesh_context(m + 1, SMode::exact).s_m - mesh_context(m + 1, SMode::asymptotic).s_m;
    const double md = static_cast<double>(m);
    scaled.push_back(std::fabs(gap) * md * md * md);
  }
  for (double v : scaled) CHECK(v <= 1.0);
}

TEST_CASE("summand A examples and symmetry") {
  const MeshContext two = mesh_context(2, SMode::exact);
  CHECK(std::fabs(summand_a(two, 0) - 2.0) <= 1e-14);
  CHECK(summand_a(two, 0) == summand_a(two, 1));
  const MeshContext ctx = mesh_context(100, SMode::exact);
  for (std::int64_t k = 0; k <= ctx.m; ++k) CHECK(summand_a(ctx, k) == summand_a(ctx, ctx.m - k));
  CHECK_THROWS_AS(summand_a(ctx, -1), DomainError);
  CHECK_THROWS_AS(summand_a(ctx, ctx.m + 1), DomainError);
}

TEST_CASE("sum of A over the exact mesh is four times the midpoint threshold") {
  for (std::int64_t n : {2, 3, 10, 100, 1000, 100000}) {
    CAPTURE(n);
    const Decomposition d = decompose(mesh_context(n, SMode::exact));
    const double gamma = gamma_exact(FrequencyRule::midpoint(), n);
    CHECK(std::fabs(d.alpha - 4.0 * gamma) <= 1e-12 * 4.0 * gamma);
  }
}

TEST_CASE("near-edge approximation D") {
  const auto& c = specfun::qrs_constants();
  SUBCASE("explicit transcription") {
    for (std::int64_t m : {15, 1000}) {
      for (std::int64_t k : {0, 1, 7}) {
        const double md = static_cast<double>(m);
        const double x = (c.c1 / 2.0 + static_cast<double>(k)) / md;
        const double want = (1.0 - c.c1 / (2.0 * md)) / (md * std::sqrt(x)) + std::sqrt(x) / (2.0 * md) +
                            (c.c1 - c.c1 * c.c1 - c.c2) / (4.0 * md * md * md * std::pow(x, 1.5));
        CHECK(fringe_dominant(m, k) == doctest::Approx(want).epsilon(1e-14));
      }
    }
  }
  SUBCASE("close to A at the first node for M = 15") {
    const MeshContext ctx = mesh_context(16, SMode::exact);
    const double a = summand_a(ctx, 0);
    CHECK(std::fabs(a - fringe_dominant(ctx, 0)) / a <= 0.05);
  }
  SUBCASE("edge error shrinks at least like M^-2 on the exact mesh") {
    std::vector<double> scaled;
    for (std::int64_t m : {100, 1000, 10000}) {
      const MeshContext ctx = mesh_context(m + 1, SMode::exact);
      double worst = 0.0;
      for (std::int64_t k = 0; k <= 10; ++k) {
        worst = std::max(worst, std::fabs(summand_a(ctx, k) - fringe_dominant(ctx, k)));
      }
      const double md = static_cast<double>(m);
      scaled.push_back(worst * md * md);
    }
    CAPTURE(scaled[0]);
    CAPTURE(scaled[1]);
    CAPTURE(scaled[2]);
    CHECK(non_growing(scaled));
  }
  CHECK_THROWS_AS(fringe_dominant(0, 0), DomainError);
  CHECK_THROWS_AS(fringe_dominant(10, 11), DomainError);
}

TEST_CASE("closed forms") {
  const auto& c = specfun::qrs_constants();
  CHECK(bulk_closed_form(1000) == doctest::Approx(kPi - 14.0 / 3.0 + (c.c1 - 3.0) / 2000.0).epsilon(1e-15));
  CHECK(std::fabs(bulk_closed_form(1'000'000'000) - (kPi - 14.0 / 3.0)) <= 2e-9);

  const FringeTerms t = fringe_closed_form_terms(1000);
  CHECK(t.constant == 14.0 / 3.0);
  CHECK(std::fabs(t.inv_sqrt_m) <= 1e-13);
  CHECK(t.inv_m == doctest::Approx((3.0 - c.c1) / 2000.0).epsilon(1e-15));
  const double bracket = (c.c1 - c.c2 - c.c1 * c.c1) / 2.0 * c.zeta_three_half_at_c1 -
                         c.c1 * c.zeta_half_at_c1 + c.zeta_neg_half_at_c1;
  CHECK(t.bracket == doctest::Approx(bracket).epsilon(1e-15));
  CHECK(t.m_three_half == doctest::Approx(bracket * std::pow(1000.0, -1.5)).epsilon(1e-15));
  CHECK(fringe_closed_form(1000) == doctest::Approx(t.total()).epsilon(1e-15));
}

TEST_CASE("decomposition identity") {
  for (std::int64_t n : {11, 1001, 100001}) {
    for (SMode mode : {SMode::exact, SMode::asymptotic}) {
      const Decomposition d = decompose(mesh_context(n, mode));
      CHECK(std::fabs(d.alpha - (d.bulk_sum + d.fringe_sum)) <= 1e-12 * d.alpha);
    }
  }
}

TEST_CASE("bulk and fringe gaps scale like M^-2 on the asymptotic mesh") {
  std::vector<double> bulk;
  std::vector<double> fringe;
  for (std::int64_t m : {100, 1000, 10000}) {
    const Decomposition d = decompose(mesh_context(m + 1, SMode::asymptotic));
    const double m2 = static_cast<double>(m) * static_cast<double>(m);
    bulk.push_back(std::fabs(d.bulk_sum - d.bulk_closed) * m2);
    fringe.push_back(std::fabs(d.fringe_sum - d.fringe_closed) * m2);
  }
  CAPTURE(bulk[2]);
  CAPTURE(fringe[2]);
  CHECK(non_growing(bulk));
  CHECK(non_growing(fringe));
}

TEST_CASE("closed forms collapse to the N^-3/2 prediction") {
  std::vector<double> scaled;
  for (std::int64_t m : {1000, 10000, 100000}) {
    const double n = static_cast<double>(m + 1);
    const double collapsed = 0.25 * (bulk_closed_form(m) + fringe_closed_form(m));
    const double gap = collapsed - predict_gamma(RuleKind::midpoint, m + 1).gamma_l;
    scaled.push_back(std::fabs(gap) * std::pow(n, 1.5));
  }
  CHECK(scaled[1] < scaled[0]);
  CHECK(scaled[2] < scaled[1]);
}

TEST_CASE("prediction examples") {
  const auto p = predict_gamma(RuleKind::midpoint, 100);
  CHECK(std::fabs(p.gamma_l - 0.7857717) <= 1e-7);
  CHECK(std::fabs(p.gamma_l - (kPi4 + kPrefactor * 1e-3)) <= 1e-15);
  CHECK(p.gamma_l == p.term_pi4 + p.term_inv_n + p.term_n32);
  CHECK(p.term_inv_n == 0.0);
  CHECK(p.error_order == "O(N^-2)");

  const auto e = predict_gamma(RuleKind::endpoint, 100);
  CHECK(e.term_inv_n == doctest::Approx(-kPi4 / 100.0).epsilon(1e-15));
  CHECK(e.gamma_l == doctest::Approx(kPi4 - kPi4 / 100.0 + kPrefactor * 1e-3).epsilon(1e-14));

  CHECK(predict_gamma(RuleKind::zeta_corrected, 50).gamma_l == kPi4);
  CHECK_THROWS_AS(predict_gamma(RuleKind::sigma_beta, 10), DomainError);
  CHECK_THROWS_AS(predict_gamma(RuleKind::midpoint, 1), DomainError);
}

TEST_CASE("endpoint prediction couples to midpoint at order N^-5/2") {
  for (std::int64_t n : {10, 100, 1000, 100000}) {
    const double nd = static_cast<double>(n);
    const double mid = predict_gamma(RuleKind::midpoint, n).gamma_l;
    const double end = predict_gamma(RuleKind::endpoint, n).gamma_l;
    const double gap = end - (1.0 - 1.0 / nd) * mid;
    CHECK(std::fabs(gap) * std::pow(nd, 2.5) <= 0.4);
  }
}

TEST_CASE("predictions approach pi/4") {
  for (RuleKind r : {RuleKind::midpoint, RuleKind::endpoint}) {
    CHECK(std::fabs(predict_gamma(r, 1'000'000'000).gamma_l - kPi4) <= 1e-9);
  }
}

TEST_CASE("custom sigma-beta prediction") {
  CHECK(predict_gamma_custom(1.0, 1.0, 100) == doctest::Approx(kPi4 * 1.01).epsilon(1e-15));
  CHECK(predict_gamma_custom(0.5, 2.0, 16) == doctest::Approx(kPi4 + 2.0 * kPi4 / 4.0).epsilon(1e-15));
  CHECK(predicted_threshold(FrequencyRule::sigma_beta(1.0, 1.0), 100) == predict_gamma_custom(1.0, 1.0, 100));
  CHECK_THROWS_AS(predict_gamma_custom(0.0, 1.0, 10), DomainError);
  CHECK_THROWS_AS(predict_gamma_custom(1.0, 0.0, 10), DomainError);
}

TEST_CASE("midpoint prediction error is O(N^-2)") {
  for (std::int64_t n : {100, 1000, 10000, 100000}) {
    const double nd = static_cast<double>(n);
    const double gap = predict_gamma(RuleKind::midpoint, n).gamma_l - gamma_exact(FrequencyRule::midpoint(), n);
    CHECK(std::fabs(gap) * nd * nd <= 0.1);
  }
}

TEST_CASE("discussion families against the exact solver") {
  std::vector<double> sb;
  std::vector<double> zc;
  for (std::int64_t n : {100, 1000, 10000}) {
    const double nd = static_cast<double>(n);
    sb.push_back(std::fabs(gamma_exact(FrequencyRule::sigma_beta(1.0, 1.0), n) - (kPi4 + kPi4 / nd)) * nd);
    zc.push_back(std::fabs(gamma_exact(FrequencyRule::zeta_corrected(), n) - kPi4) * std::pow(nd, 1.5));
  }
  CHECK(sb[1] < sb[0]);
  CHECK(sb[2] < sb[1]);
  CHECK(zc[1] < zc[0]);
  CHECK(zc[2] < zc[1]);
}
