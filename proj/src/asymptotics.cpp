#include "locklab/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "locklab/errors.hpp"
#include "locklab/parallel.hpp"
#include "locklab/specfun.hpp"

namespace locklab::asymptotics {
namespace {

constexpr double kPi = std::numbers::pi;

void check_m(std::int64_t m, const char* who) {
  if (m < 1) {
    std::ostringstream msg;
    msg << who << ": need M >= 1, got " << m;
    throw DomainError(msg.str());
  }
}

void check_k(std::int64_t m, std::int64_t k, const char* who) {
  if (k < 0 || k > m) {
    std::ostringstream msg;
    msg << who << ": index k=" << k << " outside [0, " << m << "]";
    throw DomainError(msg.str());
  }
}

}  // namespace

double MeshContext::u(std::int64_t k) const {
  return static_cast<double>(2 * k - m) * s_m / static_cast<double>(m);
}

MeshContext mesh_context(std::int64_t n, SMode mode) {
  if (n < 2) throw DomainError("mesh_context: need n >= 2");
  MeshContext ctx;
  ctx.m = n - 1;
  const double md = static_cast<double>(ctx.m);
  if (mode == SMode::exact) {
    ctx.s_m = solve_sin_theta_max(NormalizedFrequencies::evenly_spaced(n)).sin_theta;
  } else {
    const auto& k = specfun::qrs_constants();
    ctx.s_m = 1.0 - k.c1 / md - (k.c2 - k.c1) / (md * md);
  }
  ctx.delta_u = 2.0 * ctx.s_m / md;
  return ctx;
}

double summand_a(const MeshContext& ctx, std::int64_t k) {
  check_k(ctx.m, k, "summand_a");
  const double a = std::fabs(ctx.u(k));
  if (!(a < 1.0)) throw DomainError("summand_a: |u_k| >= 1");
  return ctx.delta_u / std::sqrt((1.0 - a) * (1.0 + a));
}

double fringe_dominant(std::int64_t m, std::int64_t k) {
  check_m(m, "fringe_dominant");
  check_k(m, k, "fringe_dominant");
  const auto& c = specfun::qrs_constants();
  const double md = static_cast<double>(m);
  const double x = (0.5 * c.c1 + static_cast<double>(k)) / md;
  const double sx = std::sqrt(x);
  const double lead = (1.0 / md) * (1.0 - c.c1 / (2.0 * md)) / sx;
  const double second = sx / (2.0 * md);
  const double third = ((c.c1 - c.c1 * c.c1 - c.c2) / 4.0) / (md * md * md) / (x * sx);
  return lead + second + third;
}

double fringe_dominant(const MeshContext& ctx, std::int64_t k) { return fringe_dominant(ctx.m, k); }

double bulk_closed_form(std::int64_t m) {
  check_m(m, "bulk_closed_form");
  const double c1 = specfun::qrs_constants().c1;
  return kPi - 14.0 / 3.0 + (c1 - 3.0) / (2.0 * static_cast<double>(m));
}

FringeTerms fringe_closed_form_terms(std::int64_t m) {
  check_m(m, "fringe_closed_form");
  const auto& c = specfun::qrs_constants();
  const double md = static_cast<double>(m);
  FringeTerms t{};
  t.constant = 14.0 / 3.0;
  t.inv_sqrt_m = 2.0 * c.zeta_half_at_c1 / std::sqrt(md);
  t.inv_m = (3.0 - c.c1) / 2.0 / md;
  t.bracket = (c.c1 - c.c2 - c.c1 * c.c1) / 2.0 * c.zeta_three_half_at_c1 -
              c.c1 * c.zeta_half_at_c1 + c.zeta_neg_half_at_c1;
  t.m_three_half = t.bracket * std::pow(md, -1.5);
  return t;
}

double fringe_closed_form(std::int64_t m) { return fringe_closed_form_terms(m).total(); }

Decomposition decompose(const MeshContext& ctx) {
  const std::size_t count = static_cast<std::size_t>(ctx.m + 1);
  const auto k_of = [](std::size_t i) { return static_cast<std::int64_t>(i); };
  Decomposition d{};
  d.m = ctx.m;
  d.s_m = ctx.s_m;
  d.alpha = pairwise_sum(count, [&](std::size_t i) { return summand_a(ctx, k_of(i)); });
  d.bulk_sum = pairwise_sum(count, [&](std::size_t i) {
    return summand_a(ctx, k_of(i)) - 2.0 * fringe_dominant(ctx, k_of(i));
  });
  d.fringe_sum =
      2.0 * pairwise_sum(count, [&](std::size_t i) { return fringe_dominant(ctx, k_of(i)); });
  d.bulk_closed = bulk_closed_form(ctx.m);
  d.fringe_closed = fringe_closed_form(ctx.m);
  return d;
}

AsymptoticPrediction predict_gamma(RuleKind rule, std::int64_t n) {
  if (n < 2) throw DomainError("predict_gamma: need n >= 2");
  const double nd = static_cast<double>(n);
  AsymptoticPrediction p{};
  p.rule = rule;
  p.n = n;
  p.term_pi4 = kPi / 4.0;
  p.error_order = "O(N^-2)";
  switch (rule) {
    case RuleKind::midpoint:
      p.term_n32 = specfun::qrs_constants().prefactor() * std::pow(nd, -1.5);
      break;
    case RuleKind::endpoint:
      p.term_inv_n = -(kPi / 4.0) / nd;
      p.term_n32 = specfun::qrs_constants().prefactor() * std::pow(nd, -1.5);
      break;
    case RuleKind::zeta_corrected:
      break;
    case RuleKind::sigma_beta:
      throw DomainError("predict_gamma: the sigma-beta family needs predict_gamma_custom");
  }
  p.gamma_l = p.term_pi4 + p.term_inv_n + p.term_n32;
  return p;
}

double predict_gamma_custom(double sigma, double beta, std::int64_t n) {
  if (!(sigma > 0.0 && sigma < 1.5)) throw DomainError("predict_gamma_custom: need 0 < sigma < 3/2");
  if (beta == 0.0 || !std::isfinite(beta)) throw DomainError("predict_gamma_custom: need beta != 0");
  if (n < 2) throw DomainError("predict_gamma_custom: need n >= 2");
  return kPi / 4.0 + (beta * kPi / 4.0) * std::pow(static_cast<double>(n), -sigma);
}

double predicted_threshold(const FrequencyRule& rule, std::int64_t n) {
  if (rule.kind == RuleKind::sigma_beta) return predict_gamma_custom(rule.sigma, rule.beta, n);
  return predict_gamma(rule.kind, n).gamma_l;
}

}  // namespace locklab::asymptotics
