#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "subharmonic/engine/bayes_factor.hpp"
#include "subharmonic/selection/select.hpp"
#include "subharmonic/simulation/study.hpp"

namespace subharmonic::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct RankedModel {
  ModelId model;
  int rank = 0;
  int q = 0;
  double r2 = 0.0;
  double r2_check = 0.0;
  double log_bf = 0.0;
  double posterior = 0.0;
  bool tie_with_next = false;
};

/// Top-ranked models of one method at one nu (nu is absent for BIC).
struct SelectBlock {
  Method method = Method::LaplacePhi;
  std::optional<double> nu;
  std::vector<RankedModel> models;
};

struct SelectOutput {
  std::string input;
  std::vector<std::string> columns;
  int n = 0;
  int p = 0;
  double k = 0.0;
  Variant variant = Variant::Centered;
  ModelPrior::Kind prior = ModelPrior::Kind::UniformNonNull;
  double rel_tol = kDefaultRelTol;
  std::vector<SelectBlock> blocks;
};

/// First `top` models of `method` in `report` (all of them when top is 0).
inline SelectBlock make_block(const SelectionReport& report, Method method, std::size_t top) {
  const auto& res = report.result(method);
  SelectBlock b;
  b.method = method;
  if (method != Method::BIC) b.nu = report.spec.nu;
  const std::size_t count = top == 0 ? res.ranking.size() : std::min(top, res.ranking.size());
  for (std::size_t i = 0; i < count; ++i) {
    const auto idx = res.ranking[i];
    const auto& rec = report.records[idx];
    b.models.push_back({rec.model, static_cast<int>(i + 1), rec.q, rec.r2, rec.r2_check,
                        res.log_bf[idx], res.posterior[idx], res.tie_with_next[i]});
  }
  return b;
}

namespace detail {

// JSON has no infinities; -inf log Bayes factors are written as null.
inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline double number_from(const json& j) {
  return j.is_null() ? -std::numeric_limits<double>::infinity() : j.get<double>();
}

inline ModelPrior::Kind parse_prior_kind(const std::string& s) {
  for (auto k : {ModelPrior::Kind::UniformNonNull, ModelPrior::Kind::UniformAll,
                 ModelPrior::Kind::Custom}) {
    if (prior_name(k) == s) return k;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown prior '" + s + "'");
}

inline Variant parse_variant(const std::string& s) {
  if (s == "centered") return Variant::Centered;
  if (s == "check") return Variant::Check;
  throw Error(ErrorCode::InvalidConfig, "unknown variant '" + s + "'");
}

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace detail

inline json to_json(const SelectOutput& out) {
  json blocks = json::array();
  for (const auto& b : out.blocks) {
    json models = json::array();
    for (const auto& m : b.models) {
      json indices = json::array();
      for (int i : m.model.indices()) indices.push_back(i + 1);
      models.push_back({{"rank", m.rank},
                        {"model", m.model.label()},
                        {"indices", indices},
                        {"q", m.q},
                        {"r2", m.r2},
                        {"r2_check", m.r2_check},
                        {"log_bf", detail::number_or_null(m.log_bf)},
                        {"posterior", m.posterior},
                        {"tie_with_next", m.tie_with_next}});
    }
    blocks.push_back({{"method", method_name(b.method)},
                      {"nu", b.nu ? json(*b.nu) : json(nullptr)},
                      {"models", models}});
  }
  return {{"schema", kSchemaVersion},
          {"command", "select"},
          {"input", out.input},
          {"columns", out.columns},
          {"n", out.n},
          {"p", out.p},
          {"k", out.k},
          {"variant", variant_name(out.variant)},
          {"prior", prior_name(out.prior)},
          {"rel_tol", out.rel_tol},
          {"blocks", blocks}};
}

inline SelectOutput select_output_from_json(const json& j) {
  if (j.at("schema").get<int>() != kSchemaVersion) {
    throw Error(ErrorCode::ParseError, "unsupported report schema");
  }
  SelectOutput out;
  out.input = j.at("input").get<std::string>();
  out.columns = j.at("columns").get<std::vector<std::string>>();
  out.n = j.at("n").get<int>();
  out.p = j.at("p").get<int>();
  out.k = j.at("k").get<double>();
  out.variant = detail::parse_variant(j.at("variant").get<std::string>());
  out.prior = detail::parse_prior_kind(j.at("prior").get<std::string>());
  out.rel_tol = j.at("rel_tol").get<double>();
  for (const auto& jb : j.at("blocks")) {
    SelectBlock b;
    b.method = parse_method(jb.at("method").get<std::string>());
    if (!jb.at("nu").is_null()) b.nu = jb.at("nu").get<double>();
    for (const auto& jm : jb.at("models")) {
      RankedModel m;
      m.model = ModelId::from_indices(jm.at("indices").get<std::vector<int>>());
      m.rank = jm.at("rank").get<int>();
      m.q = jm.at("q").get<int>();
      m.r2 = jm.at("r2").get<double>();
      m.r2_check = jm.at("r2_check").get<double>();
      m.log_bf = detail::number_from(jm.at("log_bf"));
      m.posterior = jm.at("posterior").get<double>();
      m.tie_with_next = jm.at("tie_with_next").get<bool>();
      b.models.push_back(m);
    }
    out.blocks.push_back(std::move(b));
  }
  return out;
}

/// One row per ranked model; doubles carry 17 significant digits.
inline std::string to_csv(const SelectOutput& out) {
  std::ostringstream s;
  s << "method,nu,rank,model,q,r2,r2_check,log_bf,posterior,tie_with_next\n";
  for (const auto& b : out.blocks) {
    for (const auto& m : b.models) {
      s << method_name(b.method) << ',' << (b.nu ? detail::fmt("%.17g", *b.nu) : "") << ','
        << m.rank << ",\"" << m.model.label() << "\"," << m.q << ','
        << detail::fmt("%.17g", m.r2) << ',' << detail::fmt("%.17g", m.r2_check) << ','
        << detail::fmt("%.17g", m.log_bf) << ',' << detail::fmt("%.17g", m.posterior) << ','
        << (m.tie_with_next ? 1 : 0) << '\n';
    }
  }
  return s.str();
}

/// Top-k blocks per method and nu with posteriors rounded to three decimals.
inline std::string to_table(const SelectOutput& out) {
  std::ostringstream s;
  s << "n = " << out.n << ", p = " << out.p << ", variant = " << variant_name(out.variant)
    << ", prior = " << prior_name(out.prior) << "\n";
  for (const auto& b : out.blocks) {
    s << "\n" << method_name(b.method);
    if (b.nu) s << "  nu = " << detail::fmt("%g", *b.nu);
    s << "\n  rank  model                         posterior\n";
    for (const auto& m : b.models) {
      char line[160];
      std::snprintf(line, sizeof line, "  %4d  %-28s  %9.3f%s\n", m.rank, m.model.label().c_str(),
                    m.posterior, m.tie_with_next ? "  (tie)" : "");
      s << line;
    }
  }
  return s.str();
}

inline json to_json(const sim::SimDesign& d) {
  json pairs = json::array();
  for (const auto& c : d.correlations) pairs.push_back({{"a", c.a}, {"b", c.b}, {"rho", c.rho}});
  return {{"n", d.n},
          {"p", d.p},
          {"correlations", pairs},
          {"true_model", d.true_mask.label()},
          {"intercept", d.intercept},
          {"coef", d.coef},
          {"sigma", d.sigma},
          {"error", d.error.name()},
          {"replicates", d.replicates},
          {"seed", d.seed}};
}

inline json to_json(const sim::FrequencyResult& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json je = {{"rule", e.rule.label()},
               {"method", method_name(e.rule.method)},
               {"nu", e.rule.method == Method::BIC ? json(nullptr) : json(e.rule.nu)},
               {"rank1", e.rank1},
               {"top3", e.top3},
               {"freq_rank1", e.freq_rank1(r.replicates)},
               {"freq_top3", e.freq_top3(r.replicates)}};
    if (!e.top3_models.empty()) {
      json reps = json::array();
      for (const auto& t : e.top3_models) {
        json labels = json::array();
        for (const auto& m : t) labels.push_back(m.label());
        reps.push_back(labels);
      }
      je["top3_models"] = reps;
    }
    entries.push_back(je);
  }
  return {{"replicates", r.replicates}, {"true_model", r.true_mask.label()}, {"entries", entries}};
}

inline std::string to_csv(const sim::FrequencyResult& r, std::optional<int> n = std::nullopt) {
  std::ostringstream s;
  for (const auto& e : r.entries) {
    if (n) s << *n << ',';
    s << e.rule.label() << ',' << r.replicates << ',' << e.rank1 << ',' << e.top3 << ','
      << detail::fmt("%.17g", e.freq_rank1(r.replicates)) << ','
      << detail::fmt("%.17g", e.freq_top3(r.replicates)) << '\n';
  }
  return s.str();
}

inline std::string frequency_csv_header(bool with_n) {
  return std::string(with_n ? "n," : "") + "rule,replicates,rank1,top3,freq_rank1,freq_top3\n";
}

inline std::string to_table(const sim::FrequencyResult& r) {
  std::ostringstream s;
  s << "true model " << r.true_mask.label() << ", " << r.replicates << " replicates\n";
  s << "  rule                 rank 1    top 3\n";
  for (const auto& e : r.entries) {
    char line[128];
    std::snprintf(line, sizeof line, "  %-18s  %7.3f  %7.3f\n", e.rule.label().c_str(),
                  e.freq_rank1(r.replicates), e.freq_top3(r.replicates));
    s << line;
  }
  return s.str();
}

}  // namespace subharmonic::io
