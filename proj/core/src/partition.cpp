#include "loggas/partition.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "loggas/quadrature.hpp"

namespace loggas {
namespace {

// Legendre coefficients of the node values under the Gauss rule on [0, 1],
// together with the standard deviation each inherits from the node errors.
struct Coefficients {
  std::vector<double> value;
  std::vector<double> noise;
};

Coefficients legendre_coefficients(const GaussLegendreRule& rule, const std::vector<double>& values,
                                   const std::vector<double>& errors) {
  const std::size_t m = values.size();
  Coefficients c{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  for (std::size_t k = 0; k < m; ++k) {
    const double t = 2.0 * rule.nodes[k] - 1.0;
    double p0 = 1.0, p1 = t;
    for (std::size_t j = 0; j < m; ++j) {
      const double pj = j == 0 ? p0 : p1;
      // int_0^1 P_j^2 = 1 / (2j + 1).
      const double w = (2.0 * j + 1.0) * rule.weights[k] * pj;
      c.value[j] += w * values[k];
      c.noise[j] += w * w * errors[k] * errors[k];
      if (j >= 1) {
        const double next = ((2.0 * j + 1.0) * t * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = next;
      }
    }
  }
  for (double& v : c.noise) v = std::sqrt(v);
  return c;
}

}  // namespace

PartitionEstimate thermodynamic_integration(const GibbsTarget& target, const ThermoOptions& options) {
  if (target.coupling() != 1.0) throw std::invalid_argument("thermodynamic integration targets full coupling");
  if (options.nodes < 2) throw std::invalid_argument("thermodynamic integration needs at least two nodes");
  const auto rule = gauss_legendre(options.nodes, 0.0, 1.0);
  const std::size_t m = rule.nodes.size();
  std::vector<ThermoNode> path(m);
  std::vector<std::exception_ptr> errors(m);
  std::atomic<std::size_t> next{0};

  const Observable interaction{"interaction", [&target](std::span<const double> x) { return target.interaction(x); }};
  auto worker = [&] {
    for (std::size_t k = next++; k < m; k = next++) {
      try {
        const GibbsTarget node = target.with_coupling(rule.nodes[k]);
        RngStream stream(options.seed, options.first_stream + k);
        const auto batch = mcmc_sample(node, stream, options.sweeps, options.burn_in, options.policy, {interaction});
        path[k] = {rule.nodes[k], rule.weights[k], batch.trace_estimate("interaction")};
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, m);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  PartitionEstimate out;
  out.method = PartitionMethod::ThermoIntegration;
  double integral = 0.0, var = 0.0;
  std::vector<double> values(m), node_errors(m);
  for (std::size_t k = 0; k < m; ++k) {
    integral += path[k].weight * path[k].derivative.value;
    var += path[k].weight * path[k].weight * path[k].derivative.stderr_ * path[k].derivative.stderr_;
    values[k] = path[k].derivative.value;
    node_errors[k] = path[k].derivative.stderr_;
  }
  // The rule integrates the interpolant exactly; what the interpolant misses is
  // bounded by the top Legendre coefficients, less the part MC noise explains.
  const auto coef = legendre_coefficients(rule, values, node_errors);
  for (std::size_t j = m - 2; j < m; ++j) {
    out.rule_error += std::max(0.0, std::abs(coef.value[j]) - 2.0 * coef.noise[j]);
  }
  out.mc_error = std::sqrt(var);
  out.log_z = log_partition_uncoupled(target) + integral;
  out.error = std::hypot(out.mc_error, out.rule_error);
  out.path = std::move(path);
  return out;
}

PartitionEstimate log_partition(const GibbsTarget& target, PartitionMethod method, const ThermoOptions& thermo) {
  PartitionEstimate out;
  out.method = method;
  switch (method) {
    case PartitionMethod::Quadrature: {
      const auto r = log_partition_quadrature(target);
      out.log_z = r.value;
      out.error = r.error_estimate;
      return out;
    }
    case PartitionMethod::Mehta:
      out.log_z = log_partition_mehta(target);
      return out;
    case PartitionMethod::ThermoIntegration:
      return thermodynamic_integration(target, thermo);
  }
  throw std::invalid_argument("log_partition: unknown method");
}

}  // namespace loggas
