#pragma once

// Hurwitz zeta kernel and the constants of the large-N expansion of the
// maximal locked phase, sin(theta_N) ~ 1 - c1/N - c2/N^2.

namespace locklab::specfun {

/// Hurwitz zeta together with a flag telling whether (s, q) lies in the
/// range where the 1e-12 relative accuracy is checked, s in [-1, 2] and
/// q in (0, 3]. Values outside are computed the same way.
struct ZetaValue {
  double value;
  bool validated;
};

/// zeta(s, q) = sum_{n>=0} (n + q)^-s, analytically continued to s < 1.
/// Throws DomainError for q <= 0, s == 1 or non-finite arguments.
double hurwitz_zeta(double s, double q);
ZetaValue hurwitz_zeta_checked(double s, double q);

/// d/dq zeta(s, q), obtained by differentiating the Euler-Maclaurin
/// expansion term by term. Equals -s * zeta(s + 1, q).
double hurwitz_zeta_dq(double s, double q);

/// sum_{k=0}^{m} (k + q)^-s approximated by
/// zeta(s, q) - (m + 1 + q)^-s / 2 + (m + 1 + q)^(1-s) / (1 - s).
double psum_asymptotic(double s, double q, long long m);

struct C1Root {
  double c1;
  double residual;  // zeta(1/2, c1/2)
  int iterations;
};

/// The zero of zeta(1/2, z/2) on 0 < z < 2. Safeguarded Newton in
/// [0.5, 0.7]. Throws ConvergenceError if |residual| > 1e-12 at the end.
C1Root solve_qrs_c1();

/// c2 = c1 - c1^2 - 30 zeta(-1/2, c1/2) / zeta(3/2, c1/2).
double qrs_c2(double c1);

struct QrsConstants {
  double c1;
  double c2;
  double zeta_half_at_c1;        // zeta(1/2, c1/2), the c1 residual
  double zeta_neg_half_at_c1;    // zeta(-1/2, c1/2)
  double zeta_three_half_at_c1;  // zeta(3/2, c1/2)

  /// 4 zeta(-1/2, c1/2), the N^-3/2 coefficient of the locking threshold.
  [[nodiscard]] double prefactor() const { return 4.0 * zeta_neg_half_at_c1; }
};

/// Computes the constants from scratch.
QrsConstants compute_qrs_constants();

/// Process-wide immutable copy, computed on first use.
const QrsConstants& qrs_constants();

}  // namespace locklab::specfun
