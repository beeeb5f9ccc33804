#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "locklab/errors.hpp"
#include "locklab/harness.hpp"

namespace locklab::harness {
namespace {

using nlohmann::json;

constexpr const char* kCsvHeader = "n,rule,gamma_exact,gamma_predicted,gamma_simulated,residual";

json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double real_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

double parse_real(const std::string& field, std::size_t line) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != field.size() || field.empty()) {
    std::ostringstream msg;
    msg << "csv line " << line << ": '" << field << "' is not a number";
    throw std::runtime_error(msg.str());
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <class Writer>
void write_to(const std::filesystem::path& destination, Writer&& write) {
  if (destination == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(destination);
  if (!out) throw std::runtime_error("cannot open '" + destination.string() + "' for writing");
  write(out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + destination.string() + "' failed");
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.17g", value);
  return buf;
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw DomainError("unknown output format '" + name + "'");
}

void write_rows_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    out << r.n << ',' << rule_name(r.rule) << ',' << format_real(r.gamma_exact) << ','
        << format_real(r.gamma_predicted) << ','
        << (r.gamma_simulated ? format_real(*r.gamma_simulated) : std::string()) << ','
        << format_real(r.residual) << '\n';
  }
}

void write_rows_json(std::ostream& out, const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const SweepRow& r : rows) {
    json j;
    j["n"] = r.n;
    j["rule"] = std::string(rule_name(r.rule));
    j["gamma_exact"] = real_or_null(r.gamma_exact);
    j["gamma_predicted"] = real_or_null(r.gamma_predicted);
    j["gamma_simulated"] = r.gamma_simulated ? real_or_null(*r.gamma_simulated) : json(nullptr);
    j["residual"] = real_or_null(r.residual);
    if (r.failure) j["failure"] = *r.failure;
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

std::vector<SweepRow> read_rows_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("csv: missing or unexpected header");
  }
  std::vector<SweepRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) {
      std::ostringstream msg;
      msg << "csv line " << lineno << ": expected 6 fields, found " << f.size();
      throw std::runtime_error(msg.str());
    }
    SweepRow r;
    r.n = static_cast<std::int64_t>(parse_real(f[0], lineno));
    r.rule = parse_rule(f[1]);
    r.gamma_exact = parse_real(f[2], lineno);
    r.gamma_predicted = parse_real(f[3], lineno);
    if (!f[4].empty()) r.gamma_simulated = parse_real(f[4], lineno);
    r.residual = parse_real(f[5], lineno);
    if (std::isnan(r.gamma_exact)) r.failure = "failed";
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SweepRow> read_rows_json(std::istream& in) {
  const json arr = json::parse(in);
  if (!arr.is_array()) throw std::runtime_error("json: expected an array of rows");
  std::vector<SweepRow> rows;
  for (const json& j : arr) {
    SweepRow r;
    r.n = j.at("n").get<std::int64_t>();
    r.rule = parse_rule(j.at("rule").get<std::string>());
    r.gamma_exact = real_from(j.at("gamma_exact"));
    r.gamma_predicted = real_from(j.at("gamma_predicted"));
    if (!j.at("gamma_simulated").is_null()) r.gamma_simulated = j.at("gamma_simulated").get<double>();
    r.residual = real_from(j.at("residual"));
    if (j.contains("failure")) r.failure = j.at("failure").get<std::string>();
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_fit_csv(std::ostream& out, const ScalingFit& fit) {
  out << "exponent,log_prefactor,r_squared,n_min,n_max,used,excluded\n"
      << format_real(fit.exponent) << ',' << format_real(fit.log_prefactor) << ','
      << format_real(fit.r_squared) << ',' << fit.n_min << ',' << fit.n_max << ',' << fit.used << ','
      << fit.excluded << '\n';
}

void write_fit_json(std::ostream& out, const ScalingFit& fit) {
  json j;
  j["exponent"] = fit.exponent;
  j["log_prefactor"] = fit.log_prefactor;
  j["r_squared"] = fit.r_squared;
  j["n_min"] = fit.n_min;
  j["n_max"] = fit.n_max;
  j["used"] = fit.used;
  j["excluded"] = fit.excluded;
  out << j.dump(2) << '\n';
}

void emit(const std::vector<SweepRow>& rows, Format format, const std::filesystem::path& destination) {
  write_to(destination, [&](std::ostream& out) {
    if (format == Format::csv) {
      write_rows_csv(out, rows);
    } else {
      write_rows_json(out, rows);
    }
  });
}

void emit(const ScalingFit& fit, Format format, const std::filesystem::path& destination) {
  write_to(destination, [&](std::ostream& out) {
    if (format == Format::csv) {
      write_fit_csv(out, fit);
    } else {
      write_fit_json(out, fit);
    }
  });
}

std::vector<SweepRow> load_rows(const std::filesystem::path& source) {
  std::ifstream in(source);
  if (!in) throw std::runtime_error("cannot open '" + source.string() + "' for reading");
  try {
    if (source.extension() == ".json") return read_rows_json(in);
    return read_rows_csv(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(source.string() + ": " + e.what());
  }
}

}  // namespace locklab::harness
