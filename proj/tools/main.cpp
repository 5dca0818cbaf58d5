#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "cli.hpp"

namespace {

using loggas::cli::RunConfig;

void add_ensemble(CLI::App* app, RunConfig& c) {
  app->add_option("--n", c.n, "Matrix size; comma list for sweeps over n")->delimiter(',');
  app->add_option("--p", c.p, "Schatten exponent");
  app->add_option("--ensemble", c.ensemble,
                  "real-symmetric, complex-hermitian, quaternion-hermitian, real, complex or quaternion");
  app->add_option("--raw", c.raw, "Raw Gibbs parameters a,b,c")->delimiter(',')->expected(3);
}

void add_budget(CLI::App* app, RunConfig& c) {
  app->add_option("--sweeps", c.sweeps, "MCMC sweeps per chain, burn-in included");
  app->add_option("--burnin", c.burn_in, "Burn-in sweeps");
  app->add_option("--chains", c.chains, "Independent chains");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  std::string replay;

  CLI::App app{"Schatten-ball geometry through one-dimensional log-gases"};
  app.set_version_flag("--version", std::string(loggas::cli::version()));
  app.require_subcommand(0, 1);
  app.fallthrough();
  app.add_option("--seed", config.seed, "Base seed")->envname("LOGGAS_SEED");
  app.add_option("--out-dir", config.out_dir, "Directory for CSV and JSON artifacts")->envname("LOGGAS_OUT_DIR");
  app.add_option("--threads", config.threads, "Worker threads")->envname("LOGGAS_THREADS");
  app.add_option("--tol", config.tol, "Override the pass tolerance of hard checks")->envname("LOGGAS_TOL");
  app.add_option("--config", replay, "Re-run the config embedded in a JSON report")->check(CLI::ExistingFile);

  auto* eq = app.add_subcommand("equilibrium", "Equilibrium density table, moments and energy");
  eq->add_option("--p", config.p, "Schatten exponent");
  eq->add_option("--grid", config.grid, "Points on [-1, 1]");

  auto* master = app.add_subcommand("master", "Master-equation solution and residual");
  master->add_option("--p", config.p, "Schatten exponent");
  master->add_option("--grid", config.grid, "Points on [-0.95, 0.95]");

  auto* sample = app.add_subcommand("sample", "Sample the Gibbs measure");
  add_ensemble(sample, config);
  add_budget(sample, config);

  auto* verify = app.add_subcommand("verify", "Check a limit theorem against simulation");
  verify->add_option("target", config.target, "theorem1, theorem2, variance, volume or oracle")
      ->required()
      ->check(CLI::IsMember({"theorem1", "theorem2", "variance", "volume", "oracle"}));
  add_ensemble(verify, config);
  add_budget(verify, config);
  verify->add_option("--q", config.q, "Moment order for theorem2");
  verify->add_option("--thermo-sweeps", config.thermo_sweeps, "Sweeps per thermodynamic-integration node");
  verify->add_option("--proposals", config.proposals, "Rejection-oracle proposals");
  verify->add_option("--B", config.B, "Truncation radius of the fluctuation statistic");

  auto* oracle = app.add_subcommand("oracle", "Uniform samples from a small real symmetric Schatten ball");
  oracle->add_option("--n", config.n, "Matrix size (at most 4)")->delimiter(',');
  oracle->add_option("--p", config.p, "Schatten exponent");
  oracle->add_option("--proposals", config.proposals, "Box proposals for the volume and moment summary");
  oracle->add_option("--count", config.count, "Accepted samples written to CSV");

  CLI11_PARSE(app, argc, argv);
  if (app.get_subcommands().empty() && replay.empty()) {
    std::cerr << app.help();
    return 2;
  }
  if (!app.get_subcommands().empty()) config.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (!replay.empty()) {
      std::ifstream in(replay);
      const auto out_dir = config.out_dir;
      config = loggas::cli::config_from_json(nlohmann::json::parse(in));
      if (app.count("--out-dir") > 0) config.out_dir = out_dir;
    }
    return loggas::cli::run(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "loggas: " << e.what() << '\n';
    return 2;
  }
}
