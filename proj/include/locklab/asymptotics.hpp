#pragma once

// Large-N expansion of the locking threshold.
//
// With M = N - 1 the midpoint threshold is gamma_L = alpha_M / 4, where
//   alpha_M = sum_{k=0}^{M} A_M(k),  A_M(k) = du / sqrt(1 - u_k^2),
//   u_k = -S_M + k du,  du = 2 S_M / M,
// and S_M is the maximal locked phase sin(theta_N). The sum is split into
// a bulk part sum [A - 2 D] and a fringe part 2 sum D, where D is the
// near-edge approximation of A at the u = -1 singularity; the mirror term at
// u = +1 is D(M - k).

#include <cstdint>
#include <string>

#include "locklab/locking.hpp"

namespace locklab::asymptotics {

enum class SMode { exact, asymptotic };

struct MeshContext {
  std::int64_t m = 1;    // N - 1
  double s_m = 0.0;      // maximal locked phase
  double delta_u = 0.0;  // 2 s_m / m

  /// u_k = (2k - m) s_m / m. Equal to -s_m + k du up to rounding and exactly
  /// antisymmetric, u_{m-k} = -u_k.
  [[nodiscard]] double u(std::int64_t k) const;
};

/// exact: s_m from the saddle-node root for N = n.
/// asymptotic: s_m = 1 - c1/M - (c2 - c1)/M^2.
MeshContext mesh_context(std::int64_t n, SMode mode);

/// A_M(k) = du / sqrt(1 - u_k^2). Throws DomainError for k outside [0, M].
double summand_a(const MeshContext& ctx, std::int64_t k);

/// D_M(k) with x = (c1/2 + k)/M:
///   (1/M)(1 - c1/(2M)) x^-1/2 + (1/(2M)) x^1/2 + ((c1 - c1^2 - c2)/4) M^-3 x^-3/2.
double fringe_dominant(const MeshContext& ctx, std::int64_t k);
double fringe_dominant(std::int64_t m, std::int64_t k);

/// pi - 14/3 + (c1 - 3)/(2M).
double bulk_closed_form(std::int64_t m);

struct FringeTerms {
  double constant;      // 14/3
  double inv_sqrt_m;    // 2 zeta(1/2, c1/2) M^-1/2 (zero up to the c1 residual)
  double inv_m;         // (3 - c1)/2 M^-1
  double m_three_half;  // [ ... ] M^-3/2
  double bracket;       // the M^-3/2 coefficient
  [[nodiscard]] double total() const { return constant + inv_sqrt_m + inv_m + m_three_half; }
};

FringeTerms fringe_closed_form_terms(std::int64_t m);
double fringe_closed_form(std::int64_t m);

/// Direct sums over the mesh, each reduced on the fixed pairwise tree.
struct Decomposition {
  std::int64_t m;
  double s_m;
  double alpha;       // sum A
  double bulk_sum;    // sum [A - 2D]
  double fringe_sum;  // 2 sum D
  double bulk_closed;
  double fringe_closed;
};

Decomposition decompose(const MeshContext& ctx);

struct AsymptoticPrediction {
  RuleKind rule;
  std::int64_t n;
  double gamma_l;
  double term_pi4;
  double term_inv_n;
  double term_n32;
  std::string error_order;
};

/// Midpoint: pi/4 + 4 zeta(-1/2, c1/2) N^-3/2.
/// Endpoint: pi/4 - (pi/4)/N + 4 zeta(-1/2, c1/2) N^-3/2.
/// Zeta-corrected: pi/4 (the N^-3/2 term is cancelled by construction).
/// Sigma-beta is rejected; use predict_gamma_custom.
AsymptoticPrediction predict_gamma(RuleKind rule, std::int64_t n);

/// pi/4 + (beta pi / 4) n^-sigma, leading order for the sigma-beta family.
double predict_gamma_custom(double sigma, double beta, std::int64_t n);

/// Prediction for any rule; sigma-beta goes to predict_gamma_custom.
double predicted_threshold(const FrequencyRule& rule, std::int64_t n);

}  // namespace locklab::asymptotics
