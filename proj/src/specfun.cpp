#include "locklab/specfun.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "locklab/errors.hpp"

namespace locklab::specfun {
namespace {

using Real = long double;

struct Rational {
  long long num;
  long long den;
};

// B_2 ... B_16.
constexpr std::array<Rational, 8> kBernoulli = {{
    {1, 6},
    {-1, 30},
    {1, 42},
    {-1, 30},
    {5, 66},
    {-691, 2730},
    {7, 6},
    {-3617, 510},
}};

// Correction terms B_2 .. B_10 are summed; B_12 is the first omitted one.
constexpr int kCorrections = 5;
constexpr int kMinDirectTerms = 16;
constexpr int kMaxDirectTerms = 1 << 16;
constexpr Real kOmittedTol = 1e-14L;

// B_{2k} / (2k)!
Real bernoulli_weight(int k) {
  Real factorial = 1;
  for (int i = 2; i <= 2 * k; ++i) factorial *= i;
  const Rational& b = kBernoulli[static_cast<std::size_t>(k - 1)];
  return static_cast<Real>(b.num) / static_cast<Real>(b.den) / factorial;
}

void check_domain(double s, double q, const char* who) {
  if (!std::isfinite(s) || !std::isfinite(q) || q <= 0.0 || s == 1.0) {
    std::ostringstream msg;
    msg << who << ": argument outside domain (s=" << s << ", q=" << q
        << "); need q > 0 and s != 1";
    throw DomainError(msg.str());
  }
}

// Euler-Maclaurin split at T direct terms. `derivative` selects d/dq.
struct Expansion {
  Real value;
  Real magnitude;  // sum of component magnitudes, for relative tolerances
  Real omitted;    // first omitted Bernoulli term
};

Expansion euler_maclaurin(Real s, Real q, int terms, bool derivative) {
  Real direct = 0;
  Real direct_abs = 0;
  for (int n = terms - 1; n >= 0; --n) {
    const Real x = n + q;
    const Real t = derivative ? -s * std::pow(x, -s - 1) : std::pow(x, -s);
    direct += t;
    direct_abs += std::fabs(t);
  }

  const Real a = terms + q;
  Real tail;
  Real half;
  if (derivative) {
    tail = -std::pow(a, -s);
    half = -0.5L * s * std::pow(a, -s - 1);
  } else {
    tail = std::pow(a, 1 - s) / (s - 1);
    half = 0.5L * std::pow(a, -s);
  }

  // rising = s (s+1) ... (s + 2k - 2); the derivative carries one more factor.
  Real corrections = 0;
  Real rising = s;
  Real omitted = 0;
  for (int k = 1; k <= kCorrections + 1; ++k) {
    Real term;
    if (derivative) {
      term = -bernoulli_weight(k) * rising * (s + 2 * k - 1) * std::pow(a, -s - 2 * k);
    } else {
      term = bernoulli_weight(k) * rising * std::pow(a, -s - 2 * k + 1);
    }
    if (k <= kCorrections) {
      corrections += term;
    } else {
      omitted = term;
    }
    rising *= (s + 2 * k - 1) * (s + 2 * k);
  }

  const Real value = direct + tail + half + corrections;
  const Real magnitude = direct_abs + std::fabs(tail) + std::fabs(half);
  return {value, magnitude, std::fabs(omitted)};
}

Real evaluate(double s, double q, bool derivative) {
  for (int terms = kMinDirectTerms; terms <= kMaxDirectTerms; terms *= 2) {
    const Expansion e = euler_maclaurin(s, q, terms, derivative);
    if (e.omitted <= kOmittedTol * e.magnitude) return e.value;
  }
  std::ostringstream msg;
  msg << "hurwitz_zeta: Euler-Maclaurin did not reach tolerance at s=" << s
      << ", q=" << q;
  throw ConvergenceError(msg.str());
}

}  // namespace

ZetaValue hurwitz_zeta_checked(double s, double q) {
  check_domain(s, q, "hurwitz_zeta");
  const bool validated = s >= -1.0 && s <= 2.0 && q <= 3.0;
  return {static_cast<double>(evaluate(s, q, false)), validated};
}

double hurwitz_zeta(double s, double q) { return hurwitz_zeta_checked(s, q).value; }

double hurwitz_zeta_dq(double s, double q) {
  check_domain(s, q, "hurwitz_zeta_dq");
  return static_cast<double>(evaluate(s, q, true));
}

double psum_asymptotic(double s, double q, long long m) {
  check_domain(s, q, "psum_asymptotic");
  if (m < 1) throw DomainError("psum_asymptotic: need M >= 1");
  const double edge = static_cast<double>(m) + 1.0 + q;
  return hurwitz_zeta(s, q) - 0.5 * std::pow(edge, -s) + std::pow(edge, 1.0 - s) / (1.0 - s);
}

C1Root solve_qrs_c1() {
  constexpr double kStepTol = 1e-14;
  constexpr double kResidualTol = 1e-12;
  constexpr int kMaxIterations = 100;

  // zeta(1/2, q) decreases in q, so f > 0 left of the root.
  const auto f = [](double z) { return hurwitz_zeta(0.5, 0.5 * z); };
  const auto df = [](double z) { return 0.5 * hurwitz_zeta_dq(0.5, 0.5 * z); };

  double lo = 0.5;
  double hi = 0.7;
  double z = 0.6;
  double fz = f(z);
  for (int it = 1; it <= kMaxIterations; ++it) {
    if (fz > 0.0) {
      lo = z;
    } else {
      hi = z;
    }
    double next = z - fz / df(z);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = next - z;
    z = next;
    fz = f(z);
    if (std::fabs(step) <= kStepTol && std::fabs(fz) <= kResidualTol) {
      return {z, fz, it};
    }
  }
  std::ostringstream msg;
  msg << "solve_qrs_c1: no convergence, last z=" << z << " residual=" << fz;
  throw ConvergenceError(msg.str());
}

double qrs_c2(double c1) {
  if (!(c1 > 0.0 && c1 < 2.0)) throw DomainError("qrs_c2: need 0 < c1 < 2");
  const double ratio = hurwitz_zeta(-0.5, 0.5 * c1) / hurwitz_zeta(1.5, 0.5 * c1);
  return c1 - c1 * c1 - 30.0 * ratio;
}

QrsConstants compute_qrs_constants() {
  const C1Root root = solve_qrs_c1();
  const double q = 0.5 * root.c1;
  QrsConstants k{};
  k.c1 = root.c1;
  k.zeta_half_at_c1 = root.residual;
  k.zeta_neg_half_at_c1 = hurwitz_zeta(-0.5, q);
  k.zeta_three_half_at_c1 = hurwitz_zeta(1.5, q);
  k.c2 = k.c1 - k.c1 * k.c1 - 30.0 * (k.zeta_neg_half_at_c1 / k.zeta_three_half_at_c1);
  return k;
}

const QrsConstants& qrs_constants() {
  static const QrsConstants cached = compute_qrs_constants();
  return cached;
}

}  // namespace locklab::specfun
