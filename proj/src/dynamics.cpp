#include "locklab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "locklab/errors.hpp"
#include "locklab/parallel.hpp"

namespace locklab::dynamics {
namespace {

constexpr double kSlipLimit = 4.0 * std::numbers::pi;
constexpr int kSlipCheckEvery = 10;
constexpr std::size_t kFieldParallelMin = 4096;
constexpr int kMaxExpansions = 10;

double mean_of(std::span<const double> v) {
  return pairwise_sum(v.size(), [&](std::size_t i) { return v[i]; }) / static_cast<double>(v.size());
}

struct WindowStats {
  double spread;
  double mean;
};

WindowStats window_stats(std::span<const double> now, std::span<const double> before, double span_time) {
  double lo = 0.0;
  double hi = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < now.size(); ++i) {
    const double f = (now[i] - before[i]) / span_time;
    if (i == 0 || f < lo) lo = f;
    if (i == 0 || f > hi) hi = f;
    sum += f;
  }
  return {hi - lo, sum / static_cast<double>(now.size())};
}

// Largest drift of any oscillator relative to the pack mean since `origin`.
double max_pack_drift(std::span<const double> now, std::span<const double> origin) {
  const double shift = mean_of(now) - mean_of(origin);
  double worst = 0.0;
  for (std::size_t i = 0; i < now.size(); ++i) {
    worst = std::max(worst, std::fabs(now[i] - origin[i] - shift));
  }
  return worst;
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::locked: return "locked";
    case Verdict::unlocked: return "unlocked";
    case Verdict::undecided: return "undecided";
  }
  return "unknown";
}

void validate(const SimConfig& c) {
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw DomainError("simulation needs dt > 0");
  if (!(c.identification_time >= 10.0 * c.dt)) {
    throw DomainError("identification time must be at least 10 time steps");
  }
  if (!(c.max_transient >= c.identification_time) || !std::isfinite(c.max_transient)) {
    throw DomainError("max transient must be finite and >= identification time");
  }
  if (!(c.lock_tolerance > 0.0)) throw DomainError("lock tolerance must be positive");
  if (!(c.gamma_bisect_tol > 0.0)) throw DomainError("bisection tolerance must be positive");
}

OrderParameter order_parameter(std::span<const double> phases) {
  if (phases.empty()) throw DomainError("order_parameter: no oscillators");
  const double n = static_cast<double>(phases.size());
  const double c = pairwise_sum(phases.size(), [&](std::size_t i) { return std::cos(phases[i]); }) / n;
  const double s = pairwise_sum(phases.size(), [&](std::size_t i) { return std::sin(phases[i]); }) / n;
  return {std::hypot(c, s), std::atan2(s, c)};
}

KuramotoField::KuramotoField(std::vector<double> omegas)
    : omegas_(std::move(omegas)), cos_(omegas_.size()), sin_(omegas_.size()) {
  if (omegas_.empty()) throw DomainError("Kuramoto field: no oscillators");
}

void KuramotoField::operator()(std::span<const double> phases, std::span<double> rates) {
  const std::size_t n = omegas_.size();
  if (phases.size() != n || rates.size() != n) {
    throw DomainError("Kuramoto field: length mismatch");
  }
  const long long count = static_cast<long long>(n);
  const bool fork = n >= kFieldParallelMin && worker_count() > 1;

#pragma omp parallel for schedule(static) num_threads(worker_count()) if (fork)
  for (long long i = 0; i < count; ++i) {
    cos_[static_cast<std::size_t>(i)] = std::cos(phases[static_cast<std::size_t>(i)]);
    sin_[static_cast<std::size_t>(i)] = std::sin(phases[static_cast<std::size_t>(i)]);
  }
  const double mean_cos = mean_of(cos_);
  const double mean_sin = mean_of(sin_);

#pragma omp parallel for schedule(static) num_threads(worker_count()) if (fork)
  for (long long i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(i);
    rates[j] = omegas_[j] + mean_sin * cos_[j] - mean_cos * sin_[j];
  }
}

std::vector<double> vector_field(std::span<const double> phases, std::span<const double> omegas) {
  if (phases.size() != omegas.size()) throw DomainError("vector_field: length mismatch");
  KuramotoField field(std::vector<double>(omegas.begin(), omegas.end()));
  std::vector<double> rates(phases.size());
  field(phases, rates);
  return rates;
}

std::vector<double> vector_field_direct(std::span<const double> phases,
                                        std::span<const double> omegas) {
  if (phases.size() != omegas.size()) throw DomainError("vector_field_direct: length mismatch");
  if (phases.empty()) throw DomainError("vector_field_direct: no oscillators");
  const std::size_t n = phases.size();
  std::vector<double> rates(n);
  for (std::size_t i = 0; i < n; ++i) {
    double coupling = 0.0;
    for (std::size_t j = 0; j < n; ++j) coupling += std::sin(phases[j] - phases[i]);
    rates[i] = omegas[i] + coupling / static_cast<double>(n);
  }
  return rates;
}

Rk4Stepper::Rk4Stepper(std::vector<double> omegas) : field_(std::move(omegas)) {
  const std::size_t n = field_.size();
  k1_.resize(n);
  k2_.resize(n);
  k3_.resize(n);
  k4_.resize(n);
  scratch_.resize(n);
}

void Rk4Stepper::step(OscillatorState& state, double dt) {
  auto& y = state.phases;
  const std::size_t n = y.size();
  field_(y, k1_);
  for (std::size_t i = 0; i < n; ++i) scratch_[i] = y[i] + 0.5 * dt * k1_[i];
  field_(scratch_, k2_);
  for (std::size_t i = 0; i < n; ++i) scratch_[i] = y[i] + 0.5 * dt * k2_[i];
  field_(scratch_, k3_);
  for (std::size_t i = 0; i < n; ++i) scratch_[i] = y[i] + dt * k3_[i];
  field_(scratch_, k4_);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += dt / 6.0 * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
  }
  state.time += dt;
}

std::vector<double> seed_phases(const FrequencySpec& spec, SeedPhases seed) {
  const NormalizedFrequencies nu = normalized(spec);
  std::vector<double> phases(nu.size(), 0.0);
  if (seed == SeedPhases::zero) return phases;
  const double s = solve_sin_theta_max(nu).sin_theta;
  const auto values = nu.values();
  for (std::size_t j = 0; j < phases.size(); ++j) phases[j] = std::asin(values[j] * s);
  return phases;
}

SimOutcome integrate_from(std::vector<double> omegas, OscillatorState initial,
                          const SimConfig& config) {
  validate(config);
  if (initial.phases.size() != omegas.size()) {
    throw DomainError("integrate: phase and frequency counts differ");
  }
  const auto window_steps = static_cast<std::int64_t>(std::llround(config.identification_time / config.dt));
  const auto max_steps = static_cast<std::int64_t>(std::llround(config.max_transient / config.dt));
  const double window_time = static_cast<double>(window_steps) * config.dt;

  Rk4Stepper stepper(std::move(omegas));
  OscillatorState state = std::move(initial);
  const double t0 = state.time;
  const std::vector<double> origin = state.phases;
  std::vector<double> window_start = state.phases;
  std::int64_t window_begin_step = 0;

  SimOutcome out;
  for (std::int64_t step = 1; step <= max_steps; ++step) {
    stepper.step(state, config.dt);
    state.time = t0 + static_cast<double>(step) * config.dt;

    if (step % kSlipCheckEvery == 0 || step % window_steps == 0) {
      for (double p : state.phases) {
        if (!std::isfinite(p)) {
          std::ostringstream msg;
          msg << "integrate: non-finite phase at t=" << state.time;
          throw ConvergenceError(msg.str());
        }
      }
      if (max_pack_drift(state.phases, origin) > kSlipLimit) {
        const double span_time = static_cast<double>(step - window_begin_step) * config.dt;
        const WindowStats w = window_stats(state.phases, window_start, span_time);
        out.verdict = Verdict::unlocked;
        out.slipped = true;
        out.freq_spread = w.spread;
        out.mean_frequency = w.mean;
        out.elapsed = static_cast<double>(step) * config.dt;
        out.order_param_final = order_parameter(state.phases).r;
        return out;
      }
    }

    if (step % window_steps == 0) {
      const WindowStats w = window_stats(state.phases, window_start, window_time);
      out.freq_spread = w.spread;
      out.mean_frequency = w.mean;
      out.elapsed = static_cast<double>(step) * config.dt;
      if (w.spread <= config.lock_tolerance) {
        out.verdict = Verdict::locked;
        out.order_param_final = order_parameter(state.phases).r;
        return out;
      }
      window_start = state.phases;
      window_begin_step = step;
    }
  }

  // The last full window decides; a trailing partial window is ignored.
  out.verdict = out.freq_spread <= 10.0 * config.lock_tolerance ? Verdict::undecided : Verdict::unlocked;
  out.elapsed = static_cast<double>(max_steps) * config.dt;
  out.order_param_final = order_parameter(state.phases).r;
  return out;
}

SimOutcome integrate(const FrequencySpec& spec, const SimConfig& config) {
  OscillatorState start;
  start.phases = seed_phases(spec, config.seed);
  return integrate_from(make_frequencies(spec), std::move(start), config);
}

BisectResult threshold_bisect(const FrequencyRule& rule, std::int64_t n, const SimConfig& config) {
  validate(config);
  BisectResult result;
  const auto probe = [&](double gamma) {
    const SimOutcome o = integrate(FrequencySpec{rule, n, gamma}, config);
    result.probes.push_back({gamma, o.verdict, o.freq_spread, o.elapsed});
    return o.verdict == Verdict::locked;
  };

  double lo = 0.5;
  double hi = 1.2;
  int expansions = 0;
  while (!probe(lo)) {
    if (++expansions > kMaxExpansions) {
      throw ConvergenceError("threshold_bisect: no locked gamma found below the bracket");
    }
    hi = lo;
    lo *= 0.5;
  }
  // A failed lower end already became an unlocked upper end.
  const bool hi_known = expansions > 0;
  expansions = 0;
  while (!hi_known && probe(hi)) {
    if (++expansions > kMaxExpansions) {
      throw ConvergenceError("threshold_bisect: no unlocked gamma found above the bracket");
    }
    lo = hi;
    hi *= 2.0;
  }

  while (hi - lo > config.gamma_bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  result.lo = lo;
  result.hi = hi;
  result.gamma_l = 0.5 * (lo + hi);
  return result;
}

}  // namespace locklab::dynamics
