#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subharmonic/subharmonic.hpp"

namespace {

using subharmonic::io::RunConfig;

std::vector<subharmonic::Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<subharmonic::Method> out;
  for (const auto& n : names) out.push_back(subharmonic::parse_method(n));
  return out;
}

struct Flags {
  std::vector<std::string> methods{"laplace-mode", "bic"};
  std::string variant = "centered";
  std::string prior = "uniform-nonnull";
  std::string format = "json";
};

void add_common(CLI::App* cmd, RunConfig& c, Flags& f) {
  cmd->add_option("--nu", c.nus, "values of nu, comma separated")->delimiter(',');
  cmd->add_option("--k", c.k, "prior exponent k >= 0");
  cmd->add_option("--variant", f.variant, "centered | check");
  cmd->add_option("--method", f.methods, "exact, laplace, laplace-mode, bic; comma separated")
      ->delimiter(',');
  cmd->add_option("--prior", f.prior, "uniform-nonnull | uniform-all");
  cmd->add_option("--format", f.format, "json | csv | table");
  cmd->add_option("--output,-o", c.output, "write here instead of stdout");
  cmd->add_option("--rel-tol", c.rel_tol, "relative tolerance of exact quadrature");
}

void add_study(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--sigma", c.sigma, "noise scale");
  cmd->add_option("--error", c.error, "gaussian | t<df>, e.g. t3");
  cmd->add_option("--seed", c.seed, "base seed");
  cmd->add_option("--replicates", c.replicates, "number of replicates");
  cmd->add_flag("--dump-top3", c.dump_top3, "list each replicate's top three models (json)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian variable selection with mixtures of g-priors"};
  app.require_subcommand(1);
  RunConfig c;
  Flags f;

  auto* sel = app.add_subcommand("select", "posterior model probabilities for a CSV data set");
  sel->add_option("--input,-i", c.input, "CSV file with a header row")->required();
  sel->add_option("--response", c.response, "response column (default: last)");
  sel->add_option("--top", c.top, "models per block; 0 keeps all");
  add_common(sel, c, f);

  auto* simu = app.add_subcommand("simulate", "true-model recovery frequencies");
  simu->add_option("--design", c.design, "correlated-16 (the only design)");
  simu->add_option("--qt", c.q_t, "true model size: 4, 8, 12 or 16");
  add_study(simu, c);
  add_common(simu, c, f);

  auto* sweep = app.add_subcommand("sweep", "true-model recovery as n grows (p = 6)");
  sweep->add_option("--n-grid", c.n_grid, "sample sizes, comma separated")
      ->delimiter(',')
      ->required();
  add_study(sweep, c);
  add_common(sweep, c, f);

  auto* bench = app.add_subcommand("bench-laplace", "exact vs Laplace log integrals, as CSV");
  bench->add_option("--n-grid", c.n_grid, "sample sizes, comma separated")
      ->delimiter(',')
      ->required();
  bench->add_option("--q", c.q, "model size");
  bench->add_option("--nu", c.nus, "values of nu, comma separated")->delimiter(',');
  bench->add_option("--k", c.k, "prior exponent k >= 0");
  bench->add_option("--r", c.r, "1 - R^2, in (0, 1)");
  bench->add_option("--rel-tol", c.rel_tol, "relative tolerance of exact quadrature");
  bench->add_option("--output,-o", c.output, "write here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  using subharmonic::io::Command;
  if (sel->parsed()) c.command = Command::Select;
  if (simu->parsed()) c.command = Command::Simulate;
  if (sweep->parsed()) c.command = Command::Sweep;
  if (bench->parsed()) c.command = Command::BenchLaplace;

  try {
    c.methods = parse_methods(f.methods);
    c.variant = subharmonic::io::detail::parse_variant(f.variant);
    c.prior = subharmonic::io::detail::parse_prior_kind(f.prior);
    c.format = subharmonic::io::parse_format(f.format);
  } catch (const subharmonic::Error& e) {
    std::cout << subharmonic::io::error_json(subharmonic::code_name(e.code()), e.what()).dump()
              << "\n";
    return 1;
  }
  return subharmonic::io::run(c);
}
