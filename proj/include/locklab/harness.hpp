#pragma once

// Sweeps over N, log-log power-law fits and flat-file persistence.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locklab/dynamics.hpp"
#include "locklab/locking.hpp"

namespace locklab::harness {

struct SweepRow {
  std::int64_t n = 0;
  RuleKind rule = RuleKind::midpoint;
  double gamma_exact = 0.0;
  double gamma_predicted = 0.0;
  std::optional<double> gamma_simulated;
  double residual = 0.0;  // gamma_predicted - gamma_exact
  std::optional<std::string> failure;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepOptions {
  bool include_simulation = false;
  std::int64_t max_simulated_n = 256;
  dynamics::SimConfig sim;
};

/// One row per distinct n, sorted ascending. A row whose computation throws
/// keeps its n and carries the message in `failure` with NaN values. Rows
/// are computed in parallel; the output does not depend on scheduling.
std::vector<SweepRow> sweep(const FrequencyRule& rule, std::vector<std::int64_t> n_values,
                            const SweepOptions& options = {});

/// min, min*factor, ... while <= max. Throws DomainError for min < 2,
/// factor < 2 or max < min.
std::vector<std::int64_t> geometric_ladder(std::int64_t min, std::int64_t max, std::int64_t factor);

/// Parses "min:max:factor".
std::vector<std::int64_t> parse_geometric_ladder(const std::string& text);

struct ScalingFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double r_squared = 0.0;
  std::int64_t n_min = 0;
  std::int64_t n_max = 0;
  std::int64_t used = 0;
  std::int64_t excluded = 0;  // |y| < 1e-14 or non-finite
};

/// Ordinary least squares of log|y| on log n. Throws DomainError with fewer
/// than three usable pairs.
ScalingFit fit_power_law(const std::vector<std::pair<std::int64_t, double>>& pairs);

/// (gamma_exact - leading) n^{3/2}, with leading = pi/4 for midpoint and
/// pi/4 - (pi/4)/n for endpoint. Converges to 4 zeta(-1/2, c1/2).
std::vector<std::pair<std::int64_t, double>> prefactor_extract(RuleKind rule,
                                                               const std::vector<std::int64_t>& n_values);

enum class Format { csv, json };

Format parse_format(const std::string& name);

// CSV columns: n,rule,gamma_exact,gamma_predicted,gamma_simulated,residual
// with 17 significant digits and an empty field for a missing simulation.
void write_rows_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_rows_json(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_rows_csv(std::istream& in);
std::vector<SweepRow> read_rows_json(std::istream& in);

void write_fit_csv(std::ostream& out, const ScalingFit& fit);
void write_fit_json(std::ostream& out, const ScalingFit& fit);

/// Writes to `destination` ("-" for stdout). Throws std::runtime_error
/// naming the path when it cannot be written.
void emit(const std::vector<SweepRow>& rows, Format format, const std::filesystem::path& destination);
void emit(const ScalingFit& fit, Format format, const std::filesystem::path& destination);

/// Reads rows back, choosing the parser from the extension (.json or csv).
std::vector<SweepRow> load_rows(const std::filesystem::path& source);

/// printf "%#.17g": 17 significant digits, trailing zeros kept.
std::string format_real(double value);

}  // namespace locklab::harness
