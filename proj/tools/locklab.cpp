// locklab: locking thresholds of the finite-N Kuramoto model with evenly
// spaced natural frequencies.
//
// Exit status: 0 success, 1 domain or numerical error, 2 usage error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "locklab/asymptotics.hpp"
#include "locklab/dynamics.hpp"
#include "locklab/errors.hpp"
#include "locklab/harness.hpp"
#include "locklab/locking.hpp"
#include "locklab/parallel.hpp"
#include "locklab/specfun.hpp"

namespace {

using nlohmann::ordered_json;
using namespace locklab;

// Rounds to `digits` significant digits so JSON carries the same value as
// the text form.
double rounded(double v, int digits) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::stod(buf);
}

std::string text_real(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Ordered key/value report printed as JSON or as aligned text.
class Report {
 public:
  explicit Report(int digits) : digits_(digits) {}

  Report& add(const std::string& key, double v) {
    json_[key] = std::isfinite(v) ? ordered_json(rounded(v, digits_)) : ordered_json(nullptr);
    lines_.emplace_back(key, text_real(v, digits_));
    return *this;
  }
  Report& add(const std::string& key, std::int64_t v) {
    json_[key] = v;
    lines_.emplace_back(key, std::to_string(v));
    return *this;
  }
  Report& add(const std::string& key, const std::string& v) {
    json_[key] = v;
    lines_.emplace_back(key, v);
    return *this;
  }
  Report& add(const std::string& key, bool v) {
    json_[key] = v;
    lines_.emplace_back(key, v ? "true" : "false");
    return *this;
  }

  [[nodiscard]] const ordered_json& json() const { return json_; }

  void print(bool as_json) const {
    if (as_json) {
      std::cout << json_.dump(2) << '\n';
      return;
    }
    std::size_t width = 0;
    for (const auto& [k, v] : lines_) width = std::max(width, k.size());
    for (const auto& [k, v] : lines_) {
      std::cout << k << std::string(width - k.size() + 2, ' ') << v << '\n';
    }
  }

 private:
  int digits_;
  ordered_json json_ = ordered_json::object();
  std::vector<std::pair<std::string, std::string>> lines_;
};

struct RuleArgs {
  std::string name = "midpoint";
  double sigma = 1.0;
  double beta = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rule", name, "midpoint | endpoint | sigma-beta | zeta-corrected")
        ->check(CLI::IsMember({"midpoint", "endpoint", "sigma-beta", "zeta-corrected"}));
    cmd->add_option("--sigma", sigma, "sigma-beta exponent, 0 < sigma < 3/2");
    cmd->add_option("--beta", beta, "sigma-beta amplitude, beta != 0");
  }

  [[nodiscard]] FrequencyRule rule() const {
    FrequencyRule r{parse_rule(name)};
    if (r.kind == RuleKind::sigma_beta) {
      r.sigma = sigma;
      r.beta = beta;
    }
    return r;
  }
};

struct SimArgs {
  dynamics::SimConfig config;
  std::string seed = "exact";

  void attach(CLI::App* cmd) {
    cmd->add_option("--dt", config.dt, "RK4 time step")->capture_default_str();
    cmd->add_option("--id-time", config.identification_time, "identification window")->capture_default_str();
    cmd->add_option("--max-transient", config.max_transient, "time cap per run")->capture_default_str();
    cmd->add_option("--tol", config.lock_tolerance, "frequency-spread lock tolerance")->capture_default_str();
    cmd->add_option("--seed", seed, "initial phases: exact | zero")->check(CLI::IsMember({"exact", "zero"}));
  }

  [[nodiscard]] dynamics::SimConfig resolved() const {
    dynamics::SimConfig c = config;
    c.seed = seed == "zero" ? dynamics::SeedPhases::zero : dynamics::SeedPhases::from_exact_solution;
    return c;
  }
};

void print_constants(bool as_json) {
  const auto& k = specfun::qrs_constants();
  Report r(12);
  r.add("c1", k.c1)
      .add("c2", k.c2)
      .add("zeta_neg_half", k.zeta_neg_half_at_c1)
      .add("prefactor", k.prefactor())
      .add("zeta_half_residual", k.zeta_half_at_c1)
      .add("zeta_three_half", k.zeta_three_half_at_c1);
  r.print(as_json);
}

void print_threshold(const FrequencyRule& rule, std::int64_t n, bool as_json) {
  const LockingSolution s = locking_threshold_exact(FrequencySpec{rule, n, 1.0});
  Report r(15);
  r.add("rule", std::string(rule_name(rule.kind)))
      .add("n", n)
      .add("sin_theta_max", s.sin_theta_max)
      .add("r", s.r)
      .add("omega_max", s.omega_max)
      .add("gamma_l", s.gamma_l)
      .add("residual", s.residual);
  r.print(as_json);
}

void print_freqs(const FrequencySpec& spec, bool normalized_only, bool as_json) {
  std::vector<double> values;
  if (normalized_only) {
    const auto nu = normalized(spec);
    values.assign(nu.values().begin(), nu.values().end());
  } else {
    values = make_frequencies(spec);
  }
  if (as_json) {
    ordered_json j;
    j["rule"] = std::string(rule_name(spec.rule.kind));
    j["n"] = spec.n;
    j["gamma"] = spec.gamma;
    j[normalized_only ? "nu" : "omega"] = values;
    std::cout << j.dump(2) << '\n';
    return;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::cout << (i + 1) << "  " << harness::format_real(values[i]) << '\n';
  }
}

void print_predict(const FrequencyRule& rule, std::int64_t n, bool as_json) {
  Report r(15);
  r.add("rule", std::string(rule_name(rule.kind))).add("n", n);
  if (rule.kind == RuleKind::sigma_beta) {
    const double g = asymptotics::predict_gamma_custom(rule.sigma, rule.beta, n);
    r.add("sigma", rule.sigma)
        .add("beta", rule.beta)
        .add("gamma_l", g)
        .add("term_pi4", std::numbers::pi / 4.0)
        .add("term_n_sigma", g - std::numbers::pi / 4.0)
        .add("error_order", std::string("leading order only"));
  } else {
    const auto p = asymptotics::predict_gamma(rule.kind, n);
    r.add("gamma_l", p.gamma_l)
        .add("term_pi4", p.term_pi4)
        .add("term_inv_n", p.term_inv_n)
        .add("term_n32", p.term_n32)
        .add("error_order", p.error_order);
  }
  r.print(as_json);
}

void print_decompose(std::int64_t n, const std::string& mode, bool as_json) {
  const auto ctx = asymptotics::mesh_context(
      n, mode == "exact" ? asymptotics::SMode::exact : asymptotics::SMode::asymptotic);
  const auto d = asymptotics::decompose(ctx);
  const auto f = asymptotics::fringe_closed_form_terms(ctx.m);
  Report r(15);
  r.add("n", n)
      .add("m", d.m)
      .add("mode", mode)
      .add("s_m", d.s_m)
      .add("delta_u", ctx.delta_u)
      .add("alpha", d.alpha)
      .add("gamma_from_alpha", d.alpha / 4.0)
      .add("bulk_sum", d.bulk_sum)
      .add("bulk_closed", d.bulk_closed)
      .add("bulk_gap", d.bulk_sum - d.bulk_closed)
      .add("fringe_sum", d.fringe_sum)
      .add("fringe_closed", d.fringe_closed)
      .add("fringe_gap", d.fringe_sum - d.fringe_closed)
      .add("fringe_constant", f.constant)
      .add("fringe_inv_sqrt_m", f.inv_sqrt_m)
      .add("fringe_inv_m", f.inv_m)
      .add("fringe_m_three_half", f.m_three_half)
      .add("gamma_predicted", asymptotics::predict_gamma(RuleKind::midpoint, n).gamma_l);
  r.print(as_json);
}

void print_simulate(const FrequencyRule& rule, std::int64_t n, double gamma, const dynamics::SimConfig& config) {
  const auto o = dynamics::integrate(FrequencySpec{rule, n, gamma}, config);
  ordered_json j;
  j["rule"] = std::string(rule_name(rule.kind));
  j["n"] = n;
  j["gamma"] = gamma;
  j["verdict"] = std::string(dynamics::verdict_name(o.verdict));
  j["freq_spread"] = o.freq_spread;
  j["mean_frequency"] = o.mean_frequency;
  j["elapsed"] = o.elapsed;
  j["order_param_final"] = o.order_param_final;
  j["slipped"] = o.slipped;
  std::cout << j.dump(2) << '\n';
}

void print_bisect(const FrequencyRule& rule, std::int64_t n, const dynamics::SimConfig& config) {
  const auto b = dynamics::threshold_bisect(rule, n, config);
  ordered_json j;
  j["rule"] = std::string(rule_name(rule.kind));
  j["n"] = n;
  j["gamma_l"] = b.gamma_l;
  j["lo"] = b.lo;
  j["hi"] = b.hi;
  j["gamma_exact"] = locking_threshold_exact(FrequencySpec{rule, n, 1.0}).gamma_l;
  ordered_json probes = ordered_json::array();
  for (const auto& p : b.probes) {
    if (p.verdict == dynamics::Verdict::undecided) {
      std::cerr << "warning: gamma=" << p.gamma << " undecided, counted as unlocked\n";
    }
    probes.push_back({{"gamma", p.gamma},
                      {"verdict", std::string(dynamics::verdict_name(p.verdict))},
                      {"freq_spread", p.freq_spread},
                      {"elapsed", p.elapsed}});
  }
  j["probes"] = std::move(probes);
  std::cout << j.dump(2) << '\n';
}

harness::Format format_for(const std::string& requested, const std::string& path) {
  if (!requested.empty()) return harness::parse_format(requested);
  return path.size() > 5 && path.ends_with(".json") ? harness::Format::json : harness::Format::csv;
}

double column_value(const harness::SweepRow& row, const std::string& column) {
  if (column == "residual") return row.residual;
  if (column == "gamma_exact") return row.gamma_exact;
  if (column == "gamma_predicted") return row.gamma_predicted;
  if (column == "gamma_simulated") return row.gamma_simulated.value_or(std::nan(""));
  if (column == "excess") return row.gamma_exact - std::numbers::pi / 4.0;
  if (column == "sim_error") return row.gamma_simulated.value_or(std::nan("")) - row.gamma_exact;
  throw DomainError("unknown column '" + column + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locking thresholds of the finite-N Kuramoto model with evenly spaced frequencies"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker count (default: LOCKLAB_THREADS or all cores)");

  bool as_json = false;

  auto* constants = app.add_subcommand("constants", "c1, c2, zeta(-1/2, c1/2) and the N^-3/2 prefactor");
  constants->add_flag("--json", as_json, "JSON output");

  RuleArgs freq_rule;
  std::int64_t freq_n = 2;
  double freq_gamma = 1.0;
  bool freq_normalized = false;
  auto* freqs = app.add_subcommand("freqs", "natural frequencies for a rule");
  freq_rule.attach(freqs);
  freqs->add_option("--n", freq_n, "oscillator count")->required();
  freqs->add_option("--gamma", freq_gamma, "half-width")->capture_default_str();
  freqs->add_flag("--normalized", freq_normalized, "print nu_j = omega_j / omega_N instead");
  freqs->add_flag("--json", as_json, "JSON output");

  RuleArgs thr_rule;
  std::int64_t thr_n = 2;
  auto* threshold = app.add_subcommand("threshold", "exact locking threshold");
  thr_rule.attach(threshold);
  threshold->add_option("--n", thr_n, "oscillator count")->required();
  threshold->add_flag("--json", as_json, "JSON output");

  RuleArgs pred_rule;
  std::int64_t pred_n = 2;
  auto* predict = app.add_subcommand("predict", "large-N prediction of the threshold");
  pred_rule.attach(predict);
  predict->add_option("--n", pred_n, "oscillator count")->required();
  predict->add_flag("--json", as_json, "JSON output");

  std::int64_t dec_n = 2;
  std::string dec_mode = "exact";
  auto* decompose = app.add_subcommand("decompose", "bulk/fringe split of the midpoint threshold sum");
  decompose->add_option("--n", dec_n, "oscillator count")->required();
  decompose->add_option("--mode", dec_mode, "exact | asymptotic maximal phase")
      ->check(CLI::IsMember({"exact", "asymptotic"}));
  decompose->add_flag("--json", as_json, "JSON output");

  RuleArgs sim_rule;
  SimArgs sim_args;
  std::int64_t sim_n = 2;
  double sim_gamma = 0.5;
  auto* simulate = app.add_subcommand("simulate", "one RK4 run with a lock verdict (JSON)");
  sim_rule.attach(simulate);
  simulate->add_option("--n", sim_n, "oscillator count")->required();
  simulate->add_option("--gamma", sim_gamma, "half-width")->required();
  sim_args.attach(simulate);

  RuleArgs bis_rule;
  SimArgs bis_args;
  std::int64_t bis_n = 2;
  auto* bisect = app.add_subcommand("bisect", "threshold by bisection over simulations (JSON)");
  bis_rule.attach(bisect);
  bisect->add_option("--n", bis_n, "oscillator count")->required();
  bisect->add_option("--bisect-tol", bis_args.config.gamma_bisect_tol, "bracket width to stop at")
      ->capture_default_str();
  bis_args.attach(bisect);

  RuleArgs sw_rule;
  SimArgs sw_args;
  std::string sw_geom;
  std::vector<std::int64_t> sw_list;
  bool sw_simulate = false;
  std::int64_t sw_max_sim = 256;
  std::string sw_out = "-";
  std::string sw_format;
  auto* sweep = app.add_subcommand("sweep", "exact, predicted and optionally simulated thresholds over N");
  sw_rule.attach(sweep);
  auto* geom = sweep->add_option("--n-geom", sw_geom, "geometric ladder min:max:factor");
  auto* list = sweep->add_option("--n", sw_list, "explicit N values");
  geom->excludes(list);
  sweep->add_flag("--simulate", sw_simulate, "add bisection thresholds for N <= --max-sim-n");
  sweep->add_option("--max-sim-n", sw_max_sim, "largest simulated N")->capture_default_str();
  sweep->add_option("--out", sw_out, "output path, - for stdout")->capture_default_str();
  sweep->add_option("--format", sw_format, "csv | json (default from extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--bisect-tol", sw_args.config.gamma_bisect_tol, "bracket width to stop at");
  sw_args.attach(sweep);

  std::string fit_in;
  std::string fit_column = "residual";
  std::string fit_out = "-";
  std::string fit_format = "json";
  std::int64_t fit_min = 0;
  std::int64_t fit_max = 0;
  auto* fit = app.add_subcommand("fit", "log-log power-law fit of a sweep column against N");
  fit->add_option("--in", fit_in, "sweep CSV or JSON")->required();
  fit->add_option("--column", fit_column,
                  "residual | excess | gamma_exact | gamma_predicted | gamma_simulated | sim_error")
      ->capture_default_str();
  fit->add_option("--n-min", fit_min, "ignore rows with smaller N");
  fit->add_option("--n-max", fit_max, "ignore rows with larger N");
  fit->add_option("--out", fit_out, "output path, - for stdout")->capture_default_str();
  fit->add_option("--format", fit_format, "json | csv")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (threads > 0) set_worker_count(threads);

  try {
    if (*constants) {
      print_constants(as_json);
    } else if (*freqs) {
      print_freqs(FrequencySpec{freq_rule.rule(), freq_n, freq_gamma}, freq_normalized, as_json);
    } else if (*threshold) {
      print_threshold(thr_rule.rule(), thr_n, as_json);
    } else if (*predict) {
      print_predict(pred_rule.rule(), pred_n, as_json);
    } else if (*decompose) {
      print_decompose(dec_n, dec_mode, as_json);
    } else if (*simulate) {
      print_simulate(sim_rule.rule(), sim_n, sim_gamma, sim_args.resolved());
    } else if (*bisect) {
      print_bisect(bis_rule.rule(), bis_n, bis_args.resolved());
    } else if (*sweep) {
      if (sw_geom.empty() && sw_list.empty()) {
        std::cerr << "sweep: give --n-geom min:max:factor or --n values\n";
        return 2;
      }
      const auto ns = sw_geom.empty() ? sw_list : harness::parse_geometric_ladder(sw_geom);
      harness::SweepOptions options;
      options.include_simulation = sw_simulate;
      options.max_simulated_n = sw_max_sim;
      options.sim = sw_args.resolved();
      const auto rows = harness::sweep(sw_rule.rule(), ns, options);
      harness::emit(rows, format_for(sw_format, sw_out), sw_out);
    } else if (*fit) {
      const auto rows = harness::load_rows(fit_in);
      std::vector<std::pair<std::int64_t, double>> pairs;
      for (const auto& row : rows) {
        if (fit_min > 0 && row.n < fit_min) continue;
        if (fit_max > 0 && row.n > fit_max) continue;
        pairs.emplace_back(row.n, column_value(row, fit_column));
      }
      harness::emit(harness::fit_power_law(pairs), harness::parse_format(fit_format), fit_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
