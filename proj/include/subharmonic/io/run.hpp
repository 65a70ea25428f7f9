#pragma once

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subharmonic/core/dataset.hpp"
#include "subharmonic/engine/bayes_factor.hpp"
#include "subharmonic/engine/error_model.hpp"
#include "subharmonic/engine/integral.hpp"
#include "subharmonic/io/csv.hpp"
#include "subharmonic/io/report.hpp"
#include "subharmonic/selection/select.hpp"
#include "subharmonic/simulation/study.hpp"

namespace subharmonic::io {

enum class Command { Select, Simulate, Sweep, BenchLaplace };
enum class Format { Json, Csv, Table };

struct RunConfig {
  Command command = Command::Select;
  std::string input;
  std::string response;
  std::vector<double> nus{0.5};
  double k = 0.0;
  Variant variant = Variant::Centered;
  std::vector<Method> methods{Method::LaplaceExactMode, Method::BIC};
  ModelPrior::Kind prior = ModelPrior::Kind::UniformNonNull;
  std::size_t top = 3;  // 0 keeps every model
  Format format = Format::Json;
  std::string output;   // empty writes to stdout
  double rel_tol = kDefaultRelTol;

  // simulate / sweep
  std::string design = "correlated-16";
  int q_t = 4;
  double sigma = 1.0;
  std::string error = "gaussian";
  std::uint64_t seed = 42;
  int replicates = 200;
  bool dump_top3 = false;

  // sweep / bench-laplace
  std::vector<int> n_grid;
  int q = 2;
  double r = 0.5;
};

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "table" || s == "pretty-table") return Format::Table;
  throw Error(ErrorCode::InvalidConfig, "unknown format '" + s + "'");
}

/// "gaussian", "t<df>" (for example t3) or "t:<df>".
inline ErrorModel parse_error_model(const std::string& s) {
  if (s == "gaussian" || s == "normal") return ErrorModel::gaussian();
  if (s.size() > 1 && s[0] == 't') {
    const std::string tail = s.substr(s[1] == ':' ? 2 : 1);
    const auto df = detail::parse_number(tail);
    if (df) return ErrorModel::student_t(*df);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown error law '" + s + "'");
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

inline void validate_config(const RunConfig& c, std::ostream& warn) {
  if (!(c.rel_tol > 1e-14 && c.rel_tol < 1e-4)) {
    throw Error(ErrorCode::InvalidConfig, "rel-tol must lie in (1e-14, 1e-4)");
  }
  if (!(c.k >= 0.0) || !std::isfinite(c.k)) throw Error(ErrorCode::InvalidConfig, "k must be >= 0");
  const bool needs_nu = c.command == Command::BenchLaplace ||
                        std::any_of(c.methods.begin(), c.methods.end(),
                                    [](Method m) { return m != Method::BIC; });
  if (c.command != Command::BenchLaplace && c.methods.empty()) {
    throw Error(ErrorCode::InvalidConfig, "no methods requested");
  }
  // The phi form does not involve k; the integral-based methods need nu > -k.
  const bool uses_k = c.command == Command::BenchLaplace ||
                      std::any_of(c.methods.begin(), c.methods.end(), [](Method m) {
                        return m == Method::ExactQuadrature || m == Method::LaplaceExactMode;
                      });
  if (needs_nu) {
    if (c.nus.empty()) throw Error(ErrorCode::InvalidConfig, "no nu values given");
    for (double nu : c.nus) {
      if (!std::isfinite(nu)) throw Error(ErrorCode::InvalidConfig, "nu must be finite");
      if (uses_k && !(nu > -c.k)) {
        throw Error(ErrorCode::InvalidConfig, "nu must exceed -k for the prior to be proper at zero");
      }
      if (!is_distribution_robust(nu)) {
        warn << "warning: nu = " << nu
             << " lies outside (0, 1); the Bayes factor then depends on the error law\n";
      }
    }
  }
  if (c.command == Command::Select && c.input.empty()) {
    throw Error(ErrorCode::InvalidConfig, "select needs --input");
  }
  if ((c.command == Command::Sweep || c.command == Command::BenchLaplace) && c.n_grid.empty()) {
    throw Error(ErrorCode::InvalidConfig, "an n grid is required");
  }
}

inline void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write '" + c.output + "'");
  f << text;
  if (!f) throw Error(ErrorCode::IoError, "write to '" + c.output + "' failed");
}

inline std::string dump(json j) {
  j["generated_at"] = utc_timestamp();
  return j.dump(2) + "\n";
}

inline std::string run_select(const RunConfig& c) {
  const RawData raw = load_csv(c.input, c.response);
  const Dataset data = standardize(raw);
  const ModelPrior prior{c.prior, {}};
  const SelectOptions opts{c.rel_tol, kDefaultEnumerationCap};

  SelectOutput out;
  out.input = c.input;
  out.columns = data.column_names;
  out.n = data.n;
  out.p = data.p;
  out.k = c.k;
  out.variant = c.variant;
  out.prior = c.prior;
  out.rel_tol = c.rel_tol;

  std::vector<Method> nu_methods;
  for (Method m : c.methods) {
    if (m != Method::BIC) nu_methods.push_back(m);
  }
  if (!nu_methods.empty()) {
    for (double nu : c.nus) {
      const GPriorSpec spec{nu, c.k, c.variant};
      const auto report = select(data, spec, nu_methods, prior, opts);
      for (Method m : nu_methods) out.blocks.push_back(make_block(report, m, c.top));
    }
  }
  if (std::find(c.methods.begin(), c.methods.end(), Method::BIC) != c.methods.end()) {
    const std::vector<Method> bic{Method::BIC};
    const auto report = select(data, GPriorSpec{0.5, c.k, c.variant}, bic, prior, opts);
    out.blocks.push_back(make_block(report, Method::BIC, c.top));
  }

  switch (c.format) {
    case Format::Json: return dump(to_json(out));
    case Format::Csv: return to_csv(out);
    case Format::Table: return to_table(out);
  }
  return {};
}

inline sim::StudyOptions study_options(const RunConfig& c) {
  sim::StudyOptions o;
  o.variant = c.variant;
  o.k = c.k;
  o.prior = c.prior;
  o.rel_tol = c.rel_tol;
  o.keep_top3 = c.dump_top3;
  return o;
}

inline std::string run_simulate(const RunConfig& c) {
  if (c.design != "correlated-16") throw Error(ErrorCode::InvalidConfig, "unknown design '" + c.design + "'");
  const auto design =
      sim::benchmark_design(c.q_t, c.sigma, parse_error_model(c.error), c.replicates, c.seed);
  const auto rules = sim::expand_methods(c.methods, c.nus);
  const auto result = sim::run_frequency_study(design, rules, study_options(c));
  switch (c.format) {
    case Format::Json:
      return dump({{"schema", kSchemaVersion},
                   {"command", "simulate"},
                   {"design", to_json(design)},
                   {"result", to_json(result)}});
    case Format::Csv: return frequency_csv_header(false) + to_csv(result);
    case Format::Table: return to_table(result);
  }
  return {};
}

inline std::string run_sweep(const RunConfig& c) {
  const auto base = sim::consistency_design(c.n_grid.front(), parse_error_model(c.error),
                                            c.replicates, c.seed);
  const auto rules = sim::expand_methods(c.methods, c.nus);
  const auto points = sim::run_consistency_sweep(base, c.n_grid, rules, study_options(c));
  switch (c.format) {
    case Format::Json: {
      json jp = json::array();
      for (const auto& pt : points) jp.push_back({{"n", pt.n}, {"result", to_json(pt.result)}});
      return dump({{"schema", kSchemaVersion},
                   {"command", "sweep"},
                   {"design", to_json(base)},
                   {"points", jp}});
    }
    case Format::Csv: {
      std::string s = frequency_csv_header(true);
      for (const auto& pt : points) s += to_csv(pt.result, pt.n);
      return s;
    }
    case Format::Table: {
      std::string s;
      for (const auto& pt : points) s += "n = " + std::to_string(pt.n) + "\n" + to_table(pt.result);
      return s;
    }
  }
  return {};
}

/// Exact, phi and exact-mode Laplace values of one centered g-integral per n.
inline std::string run_bench_laplace(const RunConfig& c) {
  std::string s =
      "n,q,nu,k,r,log_exact,log_phi,log_mode,abs_err_phi,rel_err_phi,abs_err_mode,rel_err_mode\n";
  for (double nu : c.nus) {
    for (int n : c.n_grid) {
      const auto spec = IntegralSpec::centered(n, c.q, c.r, nu, c.k);
      const double exact = log_integral_J(spec, c.rel_tol);
      const double phi_v = log_integral_phi(spec);
      const double mode_v = log_integral_laplace_exact(spec);
      const double scale = std::abs(exact);
      s += std::to_string(n) + ',' + std::to_string(c.q) + ',' + fmt("%.17g", nu) + ',' +
           fmt("%.17g", c.k) + ',' + fmt("%.17g", c.r) + ',' + fmt("%.17g", exact) + ',' +
           fmt("%.17g", phi_v) + ',' + fmt("%.17g", mode_v) + ',' + fmt("%.17g", std::abs(phi_v - exact)) +
           ',' + fmt("%.17g", std::abs(phi_v - exact) / scale) + ',' +
           fmt("%.17g", std::abs(mode_v - exact)) + ',' + fmt("%.17g", std::abs(mode_v - exact) / scale) +
           '\n';
    }
  }
  return s;
}

}  // namespace detail

/// Error document written on failure.
inline json error_json(std::string_view code, const std::string& message) {
  return {{"schema", kSchemaVersion}, {"error", {{"code", code}, {"message", message}}}};
}

/// Runs one command. Returns 0 on success; on failure writes an error JSON
/// document to `out` and returns 1.
inline int run(const RunConfig& config, std::ostream& out = std::cout,
               std::ostream& warn = std::cerr) {
  try {
    detail::validate_config(config, warn);
    std::string text;
    switch (config.command) {
      case Command::Select: text = detail::run_select(config); break;
      case Command::Simulate: text = detail::run_simulate(config); break;
      case Command::Sweep: text = detail::run_sweep(config); break;
      case Command::BenchLaplace: text = detail::run_bench_laplace(config); break;
    }
    detail::emit(config, text, out);
    return 0;
  } catch (const Error& e) {
    out << error_json(code_name(e.code()), e.what()).dump() << "\n";
  } catch (const std::exception& e) {
    out << error_json("Internal", e.what()).dump() << "\n";
  }
  return 1;
}

}  // namespace subharmonic::io
