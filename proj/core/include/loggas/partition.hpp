#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "loggas/gibbs.hpp"
#include "loggas/sampler.hpp"

namespace loggas {

enum class PartitionMethod { Quadrature, Mehta, ThermoIntegration };

struct ThermoOptions {
  int nodes = 16;  // Gauss-Legendre nodes in the coupling s
  std::size_t sweeps = 200'000;
  std::size_t burn_in = 20'000;
  std::size_t threads = 1;
  std::uint64_t seed = 1;
  std::uint64_t first_stream = 0;
  StepPolicy policy{};
};

struct ThermoNode {
  double s;
  double weight;
  Estimate derivative;  // E_s[b sum log|x_i^a - x_j^a|]
};

struct PartitionEstimate {
  double log_z = 0.0;
  double error = 0.0;
  PartitionMethod method = PartitionMethod::Quadrature;
  /// Thermodynamic integration only.
  double mc_error = 0.0;
  double rule_error = 0.0;
  std::vector<ThermoNode> path;
};

/// log Z_{n,p}. Quadrature needs n <= 3; Mehta needs p = 2, a = 1, c = 0.
/// Thermodynamic integration runs one chain per node s_k of the coupling, from
/// the factorized s = 0 endpoint: log Z(1) = log Z(0) + int_0^1 E_s[interaction] ds.
PartitionEstimate log_partition(const GibbsTarget& target, PartitionMethod method, const ThermoOptions& thermo = {});

PartitionEstimate thermodynamic_integration(const GibbsTarget& target, const ThermoOptions& options);

}  // namespace loggas
