#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "loggas/inertia.hpp"

namespace loggas {
namespace {

constexpr double kMinAcceptance = 1e-6;

void check_size(int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("ball oracle supports 1 <= n <= 4");
}

// Fills `matrix` from a uniform draw in the bounding box and returns ||T||_HS^2.
double propose(int n, RngStream& stream, std::vector<double>& matrix) {
  double hs2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = 2.0 * stream.uniform() - 1.0;
    matrix[i * n + i] = u;
    hs2 += u * u;
    for (int j = i + 1; j < n; ++j) {
      // HS coordinate u in [-sqrt 2, sqrt 2], entry u / sqrt 2 in [-1, 1].
      const double e = 2.0 * stream.uniform() - 1.0;
      matrix[i * n + j] = matrix[j * n + i] = e;
      hs2 += 2.0 * e * e;
    }
  }
  return hs2;
}

double log_box_volume(int n) {
  const double off = n * (n - 1) / 2.0;
  return n * std::log(2.0) + off * std::log(2.0 * std::numbers::sqrt2);
}

}  // namespace

std::vector<double> symmetric_eigenvalues(int n, const std::vector<double>& m) {
  if (n < 1 || m.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("symmetric_eigenvalues: bad matrix size");
  if (n == 1) return {m[0]};
  if (n == 2) {
    const double mid = 0.5 * (m[0] + m[3]);
    const double r = std::hypot(0.5 * (m[0] - m[3]), m[1]);
    return {mid - r, mid + r};
  }
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> map(m.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(map, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + n};
}

double schatten_norm(const std::vector<double>& eigenvalues, double p) {
  double s = 0.0;
  for (double v : eigenvalues) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

std::vector<BallSample> ball_oracle_sample(int n, double p, RngStream& stream, std::size_t count) {
  check_size(n);
  if (!(p >= 1.0)) throw std::invalid_argument("ball_oracle_sample: p must be at least 1");
  std::vector<BallSample> out;
  out.reserve(count);
  std::vector<double> matrix(static_cast<std::size_t>(n) * n);
  std::size_t proposals = 0;
  while (out.size() < count) {
    ++proposals;
    propose(n, stream, matrix);
    auto ev = symmetric_eigenvalues(n, matrix);
    const double norm = schatten_norm(ev, p);
    if (norm <= 1.0) out.push_back({n, matrix, std::move(ev), norm});
    if (proposals % 1'000'000 == 0 && static_cast<double>(out.size()) < kMinAcceptance * proposals)
      throw std::runtime_error("ball_oracle_sample: acceptance below 1e-6");
  }
  return out;
}

BallOracleResult ball_oracle(int n, double p, RngStream& stream, std::size_t proposals) {
  check_size(n);
  if (!(p >= 1.0)) throw std::invalid_argument("ball_oracle: p must be at least 1");
  if (proposals == 0) throw std::invalid_argument("ball_oracle: no proposals");
  std::vector<double> matrix(static_cast<std::size_t>(n) * n);
  // Raw moments of X = ||T||_HS^2 over accepted draws.
  double m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
  std::size_t accepted = 0;
  for (std::size_t k = 0; k < proposals; ++k) {
    const double x = propose(n, stream, matrix);
    if (schatten_norm(symmetric_eigenvalues(n, matrix), p) > 1.0) continue;
    ++accepted;
    m1 += x;
    m2 += x * x;
    m3 += x * x * x;
    m4 += x * x * x * x;
  }
  const double rate = static_cast<double>(accepted) / proposals;
  if (rate < kMinAcceptance) throw std::runtime_error("ball_oracle: acceptance below 1e-6");

  BallOracleResult r;
  r.n = n;
  r.p = p;
  r.proposals = proposals;
  r.accepted = accepted;
  const double d = n * (n + 1) / 2.0;
  const double box = std::exp(log_box_volume(n));
  r.volume = box * rate;
  r.volume_stderr = box * std::sqrt(rate * (1.0 - rate) / proposals);

  const double na = static_cast<double>(accepted);
  m1 /= na;
  m2 /= na;
  m3 /= na;
  m4 /= na;
  const double var = m2 - m1 * m1;
  r.mean_hs2 = m1;
  r.mean_hs2_stderr = std::sqrt(var / na);
  r.var_hs2 = var;
  r.i2 = std::sqrt(m1) / std::pow(r.volume, 1.0 / d);
  r.i2_stderr = r.i2 * std::hypot(0.5 * r.mean_hs2_stderr / m1, r.volume_stderr / (d * r.volume));

  r.variance_ratio = d * var / (m1 * m1);
  // Delta method on g(m1, m2) = d (m2 / m1^2 - 1).
  const double g1 = -2.0 * d * m2 / (m1 * m1 * m1);
  const double g2 = d / (m1 * m1);
  const double v11 = var;
  const double v12 = m3 - m1 * m2;
  const double v22 = m4 - m2 * m2;
  r.variance_ratio_stderr = std::sqrt(std::max(0.0, g1 * g1 * v11 + 2.0 * g1 * g2 * v12 + g2 * g2 * v22) / na);
  return r;
}

}  // namespace loggas
