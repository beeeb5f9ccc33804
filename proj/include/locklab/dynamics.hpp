#pragma once

// Direct simulation of the Kuramoto model with K = 1,
//   dtheta_i/dt = omega_i + (1/N) sum_j sin(theta_j - theta_i),
// with fixed-step RK4, and a bisection on gamma for the locking threshold.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "locklab/locking.hpp"

namespace locklab::dynamics {

enum class SeedPhases { from_exact_solution, zero };

enum class Verdict { locked, unlocked, undecided };

std::string_view verdict_name(Verdict v);

struct SimConfig {
  double dt = 0.10;
  double identification_time = 1e3;
  double max_transient = 8e4;
  double lock_tolerance = 1e-6;  // bound on the effective-frequency spread
  double gamma_bisect_tol = 1e-4;
  SeedPhases seed = SeedPhases::from_exact_solution;
};

/// dt > 0, identification_time >= 10 dt, max_transient >= identification_time,
/// lock_tolerance > 0, gamma_bisect_tol > 0.
void validate(const SimConfig& config);

/// Phases are kept unwrapped so slips show up as drift.
struct OscillatorState {
  std::vector<double> phases;
  double time = 0.0;
};

struct SimOutcome {
  Verdict verdict = Verdict::undecided;
  double freq_spread = 0.0;     // max - min effective frequency, last window
  double mean_frequency = 0.0;  // mean effective frequency, last window
  double elapsed = 0.0;
  double order_param_final = 0.0;
  bool slipped = false;  // stopped early on a phase slip
};

struct OrderParameter {
  double r;
  double psi;
};

/// r e^{i psi} = (1/N) sum_j e^{i theta_j}. Throws DomainError when empty.
OrderParameter order_parameter(std::span<const double> phases);

/// Mean-field evaluation of the right-hand side,
///   omega_i + <sin theta> cos theta_i - <cos theta> sin theta_i,
/// in O(N). Reuses its scratch buffers between calls.
class KuramotoField {
 public:
  explicit KuramotoField(std::vector<double> omegas);

  [[nodiscard]] std::span<const double> omegas() const { return omegas_; }
  [[nodiscard]] std::size_t size() const { return omegas_.size(); }

  void operator()(std::span<const double> phases, std::span<double> rates);

 private:
  std::vector<double> omegas_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// O(N) mean-field form. Throws DomainError on length mismatch.
std::vector<double> vector_field(std::span<const double> phases, std::span<const double> omegas);

/// O(N^2) double sum, the serial reference for vector_field.
std::vector<double> vector_field_direct(std::span<const double> phases,
                                        std::span<const double> omegas);

/// Classic fourth-order Runge-Kutta with preallocated stages.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(std::vector<double> omegas);

  void step(OscillatorState& state, double dt);
  [[nodiscard]] const KuramotoField& field() const { return field_; }

 private:
  KuramotoField field_;
  std::vector<double> k1_, k2_, k3_, k4_, scratch_;
};

/// theta_j = asin(nu_j s*) with s* the saddle-node root for the frequencies of `spec`.
std::vector<double> seed_phases(const FrequencySpec& spec, SeedPhases seed);

/// Runs from `initial` until the verdict is known:
///   locked     spread over an identification window <= lock_tolerance
///   unlocked   some oscillator drifted more than 4 pi away from the pack,
///              or the spread stayed above 10x tolerance up to max_transient
///   undecided  max_transient reached with the spread in (tol, 10 tol].
/// Throws ConvergenceError if the state becomes non-finite.
SimOutcome integrate_from(std::vector<double> omegas, OscillatorState initial,
                          const SimConfig& config);

SimOutcome integrate(const FrequencySpec& spec, const SimConfig& config);

struct Probe {
  double gamma;
  Verdict verdict;
  double freq_spread;
  double elapsed;
};

struct BisectResult {
  double gamma_l;  // bracket midpoint
  double lo;       // last locked gamma
  double hi;       // last unlocked (or undecided) gamma
  std::vector<Probe> probes;
};

/// Brackets the threshold starting from [0.5, 1.2], expanding geometrically
/// (at most 10 times per side) if an end has the wrong verdict, then bisects
/// until hi - lo <= gamma_bisect_tol. Undecided counts as unlocked.
BisectResult threshold_bisect(const FrequencyRule& rule, std::int64_t n, const SimConfig& config);

}  // namespace locklab::dynamics
