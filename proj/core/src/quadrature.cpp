#include "loggas/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace loggas {
namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525038712, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double lo, hi;
  double value, error, resabs;
  std::size_t segment;
};

bool operator<(const Panel& l, const Panel& r) { return l.error < r.error; }

// A segment after removing flagged singular endpoints: integrate g over [lo, hi].
struct Mapped {
  enum class Kind { Identity, SqrtLeft, SqrtRight, ExpLeft, ExpRight } kind;
  double a, b, lo, hi;

  double operator()(const Integrand& f, double u) const {
    switch (kind) {
      case Kind::Identity:
        return f(u);
      case Kind::SqrtLeft:
        return 2.0 * u * f(a + u * u);
      case Kind::SqrtRight:
        return 2.0 * u * f(b - u * u);
      case Kind::ExpLeft: {
        const double d = (b - a) * std::exp(-u);
        return d * f(a + d);
      }
      case Kind::ExpRight: {
        const double d = (b - a) * std::exp(-u);
        return d * f(b - d);
      }
    }
    return 0.0;
  }
};

double exp_horizon(double end, double h) {
  const double floor = 16.0 * kEps * std::max(std::abs(end), 1e-280);
  return std::clamp(std::log(h / floor), 1.0, 60.0);
}

void map_segment(const Segment& s, std::vector<Mapped>& out) {
  using K = Mapped::Kind;
  const double h = s.b - s.a;
  auto left = [&](double a, double b, Endpoint e) {
    if (e == Endpoint::InverseSqrt) out.push_back({K::SqrtLeft, a, b, 0.0, std::sqrt(b - a)});
    else out.push_back({K::ExpLeft, a, b, 0.0, exp_horizon(a, b - a)});
  };
  auto right = [&](double a, double b, Endpoint e) {
    if (e == Endpoint::InverseSqrt) out.push_back({K::SqrtRight, a, b, 0.0, std::sqrt(b - a)});
    else out.push_back({K::ExpRight, a, b, 0.0, exp_horizon(b, b - a)});
  };
  const bool ls = s.flags.left != Endpoint::Regular;
  const bool rs = s.flags.right != Endpoint::Regular;
  if (!ls && !rs) {
    out.push_back({K::Identity, s.a, s.b, s.a, s.b});
  } else if (ls && !rs) {
    left(s.a, s.b, s.flags.left);
  } else if (!ls && rs) {
    right(s.a, s.b, s.flags.right);
  } else {
    const double m = s.a + 0.5 * h;
    left(s.a, m, s.flags.left);
    right(m, s.b, s.flags.right);
  }
}

Panel kronrod21(const Integrand& f, const Mapped& g, double lo, double hi, std::size_t seg) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::array<double, 10> f1{}, f2{};
  const double fc = g(f, center);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  for (int j = 0; j < 5; ++j) {
    const int jt = 2 * j + 1;
    const double dx = half * kXgk[jt];
    const double v1 = g(f, center - dx);
    const double v2 = g(f, center + dx);
    f1[jt] = v1;
    f2[jt] = v2;
    resg += kWg[j] * (v1 + v2);
    resk += kWgk[jt] * (v1 + v2);
    resabs += kWgk[jt] * (std::abs(v1) + std::abs(v2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jt = 2 * j;
    const double dx = half * kXgk[jt];
    const double v1 = g(f, center - dx);
    const double v2 = g(f, center + dx);
    f1[jt] = v1;
    f2[jt] = v2;
    resk += kWgk[jt] * (v1 + v2);
    resabs += kWgk[jt] * (std::abs(v1) + std::abs(v2));
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));

  Panel p{lo, hi, resk * half, std::abs((resk - resg) * half), resabs * std::abs(half), seg};
  resasc *= std::abs(half);
  if (resasc != 0.0 && p.error != 0.0) p.error = resasc * std::min(1.0, std::pow(200.0 * p.error / resasc, 1.5));
  if (p.resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) p.error = std::max(50.0 * kEps * p.resabs, p.error);
  if (!std::isfinite(p.value)) p.error = std::numeric_limits<double>::infinity();
  return p;
}

}  // namespace

QuadratureResult integrate_segments(const Integrand& f, std::span<const Segment> segments,
                                    const QuadratureOptions& options) {
  std::vector<Mapped> maps;
  for (const auto& s : segments) {
    if (!(s.a < s.b)) throw std::invalid_argument("integrate: each segment needs a < b");
    map_segment(s, maps);
  }
  if (!(options.abs_tol > 0.0 || options.rel_tol > 0.0)) throw std::invalid_argument("integrate: tolerance must be positive");

  std::vector<Panel> heap;
  std::vector<Panel> settled;
  std::size_t evals = 0;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    heap.push_back(kronrod21(f, maps[i], maps[i].lo, maps[i].hi, i));
    evals += 21;
  }
  std::make_heap(heap.begin(), heap.end());

  auto totals = [&] {
    double v = 0.0, e = 0.0;
    for (const auto& p : heap) v += p.value, e += p.error;
    for (const auto& p : settled) v += p.value, e += p.error;
    return std::pair{v, e};
  };

  auto [value, error] = totals();
  std::size_t since_resum = 0;
  while (!heap.empty()) {
    const double target = std::max(options.abs_tol, options.rel_tol * std::abs(value));
    if (error <= target) break;
    if (evals + 42 > options.max_evaluations) {
      throw QuadratureError("integrate: evaluation budget exhausted", {value, error, evals});
    }
    std::pop_heap(heap.begin(), heap.end());
    Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const double scale = std::max(std::abs(worst.lo), std::abs(worst.hi));
    const bool too_narrow = (worst.hi - worst.lo) <= 64.0 * kEps * std::max(scale, 1e-300) ||
                            mid <= worst.lo || mid >= worst.hi;
    if (too_narrow || worst.error <= 64.0 * kEps * worst.resabs) {
      settled.push_back(worst);
      continue;
    }
    const Mapped& g = maps[worst.segment];
    Panel l = kronrod21(f, g, worst.lo, mid, worst.segment);
    Panel r = kronrod21(f, g, mid, worst.hi, worst.segment);
    evals += 42;
    value += l.value + r.value - worst.value;
    error += l.error + r.error - worst.error;
    heap.push_back(l);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(r);
    std::push_heap(heap.begin(), heap.end());
    if (++since_resum == 64) {
      std::tie(value, error) = totals();
      since_resum = 0;
    }
  }
  std::tie(value, error) = totals();
  if (!std::isfinite(value)) throw QuadratureError("integrate: non-finite integrand", {value, error, evals});
  return {value, error, evals};
}

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& options,
                           EndpointFlags flags) {
  const Segment s{a, b, flags};
  return integrate_segments(f, std::span(&s, 1), options);
}

QuadratureResult integrate(const Integrand& f, double a, double b, double tol, EndpointFlags flags) {
  QuadratureOptions o;
  o.abs_tol = tol;
  return integrate(f, a, b, o, flags);
}

QuadratureResult integrate(const Integrand& f, double a, double b, std::span<const double> breaks,
                           const QuadratureOptions& options, EndpointFlags flags) {
  std::vector<double> pts{a};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  std::sort(pts.begin() + 1, pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  pts.push_back(b);
  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    Segment s{pts[i], pts[i + 1], {}};
    if (i == 0) s.flags.left = flags.left;
    if (i + 2 == pts.size()) s.flags.right = flags.right;
    segs.push_back(s);
  }
  return integrate_segments(f, segs, options);
}

QuadratureResult integrate2d(const Integrand2d& f, const Rectangle& d, const Quadrature2dOptions& options) {
  if (!(d.x0 < d.x1 && d.y0 < d.y1)) throw std::invalid_argument("integrate2d: empty rectangle");
  const double width = d.x1 - d.x0;
  QuadratureOptions inner;
  inner.abs_tol = options.abs_tol / (4.0 * width);
  inner.rel_tol = 0.0;
  inner.max_evaluations = options.max_evaluations;
  std::size_t evals = 0;
  double inner_error = 0.0;

  auto inner_integral = [&](double x) {
    std::vector<double> pts{d.y0};
    for (double y : options.y_breaks)
      if (y > d.y0 && y < d.y1) pts.push_back(y);
    const bool diag = options.diagonal_singular && x > d.y0 && x < d.y1;
    if (diag) pts.push_back(x);
    std::sort(pts.begin() + 1, pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.push_back(d.y1);
    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (!(pts[i] < pts[i + 1])) continue;
      Segment s{pts[i], pts[i + 1], {}};
      if (i == 0) s.flags.left = options.y_flags.left;
      if (i + 2 == pts.size()) s.flags.right = options.y_flags.right;
      if (diag && pts[i] == x) s.flags.left = Endpoint::Log;
      if (diag && pts[i + 1] == x) s.flags.right = Endpoint::Log;
      segs.push_back(s);
    }
    const auto r = integrate_segments([&](double y) { return f(x, y); }, segs, inner);
    evals += r.evaluations;
    inner_error = std::max(inner_error, r.error_estimate);
    return r.value;
  };

  QuadratureOptions outer;
  outer.abs_tol = 0.5 * options.abs_tol;
  outer.rel_tol = options.rel_tol;
  outer.max_evaluations = options.max_evaluations;
  const auto r = integrate(inner_integral, d.x0, d.x1, options.x_breaks, outer, options.x_flags);
  return {r.value, r.error_estimate + width * inner_error, evals};
}

QuadratureResult integrate2d(const Integrand2d& f, const Rectangle& domain, double tol) {
  Quadrature2dOptions o;
  o.abs_tol = tol;
  return integrate2d(f, domain, o);
}

GaussLegendreRule gauss_legendre(int order, double lo, double hi) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= order; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute derivative at the converged root.
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= order; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = order * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[order - 1 - i] = mid + half * z;
    rule.weights[i] = rule.weights[order - 1 - i] = w * half;
  }
  return rule;
}

}  // namespace loggas
