#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "loggas/params.hpp"

namespace loggas::cli {

struct RunConfig {
  std::string subcommand;  // equilibrium, master, sample, verify, oracle
  std::string target;      // verify: theorem1, theorem2, variance, volume, oracle
  std::string ensemble = "real-symmetric";
  std::vector<double> raw;  // a, b, c; overrides the ensemble when set
  std::vector<int> n{8};
  double p = 4.0;
  double q = 4.0;
  std::size_t grid = 256;
  std::size_t sweeps = 200'000;
  std::size_t burn_in = 20'000;
  std::size_t chains = 1;
  std::size_t thermo_sweeps = 60'000;  // per coupling node
  std::size_t proposals = 10'000'000;
  std::size_t count = 1000;  // oracle samples written to CSV
  double B = 1.5;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string out_dir = ".";
  std::optional<double> tol;
};

nlohmann::json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

/// Table-row names: real-symmetric, complex-hermitian, quaternion-hermitian,
/// real, complex, quaternion.
EnsembleSpec make_spec(const RunConfig& config, int n);

const char* version();

/// Runs one subcommand, writing CSV/JSON artifacts to config.out_dir and a
/// summary to `log`. Returns 0 unless a hard check failed.
int run(const RunConfig& config, std::ostream& log);

}  // namespace loggas::cli
