#include "polypotential/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>

#include "polypotential/specfun.hpp"

namespace polypotential {
namespace {

constexpr double kPi = std::numbers::pi;

GaussRule build_gauss_legendre(int m) {
  GaussRule g;
  g.nodes.resize(m);
  g.weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = m * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = 0.0;
    for (int j = 0; j < m; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
    }
    dp = m * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    g.nodes[i] = -z;
    g.nodes[m - 1 - i] = z;
    g.weights[i] = w;
    g.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) g.nodes[m / 2] = 0.0;
  return g;
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

Interval gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, resk * h, std::abs((resk - resg) * h)};
}

void require_dimension(int n, int lo, const char* who) {
  if (n < lo) throw DomainError(std::string(who) + ": dimension too small");
}

}  // namespace

const GaussRule& gauss_legendre(int m) {
  if (m < 1) throw DomainError("gauss_legendre: m must be >= 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[m];
  if (!slot) slot = std::make_unique<GaussRule>(build_gauss_legendre(m));
  return *slot;
}

Estimate integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                            const AdaptiveOptions& opt) {
  if (a == b) return {};
  std::priority_queue<Interval> heap;
  Interval first = gk15(f, a, b);
  double value = first.value;
  double error = first.error;
  heap.push(first);
  int count = 1;
  while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(value)) && count < opt.max_intervals) {
    const Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Interval l = gk15(f, worst.a, mid);
    const Interval r = gk15(f, mid, worst.b);
    value += l.value + r.value - worst.value;
    error += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // Re-sum from the leaves to remove drift from the incremental updates.
  double v = 0.0;
  double e = 0.0;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  return {v, e};
}

double ball_volume(int n) { return std::pow(kPi, 0.5 * n) / gamma_fn(0.5 * n + 1.0); }

double sphere_area(int n) { return 2.0 * std::pow(kPi, 0.5 * n) / gamma_fn(0.5 * n); }

Point spherical_to_cartesian(double r, const Eigen::VectorXd& theta) {
  const int n = static_cast<int>(theta.size()) + 1;
  require_dimension(n, 2, "spherical_to_cartesian");
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("spherical_to_cartesian: r must lie in [0,1]");
  for (int i = 0; i < n - 1; ++i) {
    const double hi = (i < n - 2) ? kPi : 2.0 * kPi;
    if (!(theta(i) >= 0.0 && theta(i) <= hi)) {
      throw DomainError("spherical_to_cartesian: angle " + std::to_string(i + 1) + " out of range");
    }
  }
  Point x(n);
  double prod = r;
  for (int i = 0; i < n - 1; ++i) {
    x(i) = prod * std::cos(theta(i));
    prod *= std::sin(theta(i));
  }
  x(n - 1) = prod;
  return x;
}

SphericalCoords cartesian_to_spherical(const Point& x) {
  const int n = static_cast<int>(x.size());
  require_dimension(n, 2, "cartesian_to_spherical");
  SphericalCoords s;
  s.r = x.norm();
  s.theta = Eigen::VectorXd::Zero(n - 1);
  for (int i = 0; i < n - 2; ++i) {
    const double tail = x.tail(n - 1 - i).norm();
    s.theta(i) = std::atan2(tail, x(i));
  }
  double last = std::atan2(x(n - 1), x(n - 2));
  if (last < 0.0) last += 2.0 * kPi;
  s.theta(n - 2) = last;
  return s;
}

double spherical_jacobian(double r, const Eigen::VectorXd& theta) {
  const int n = static_cast<int>(theta.size()) + 1;
  double j = std::pow(r, n - 1);
  for (int i = 0; i < n - 2; ++i) j *= std::pow(std::sin(theta(i)), n - 2 - i);
  return j;
}

SphereRule sphere_rule(int n, int level) {
  require_dimension(n, 2, "sphere_rule");
  if (level < 1) throw DomainError("sphere_rule: level must be >= 1");
  const double count = std::pow(double(level), n - 2) * 2.0 * level;
  if (count > kMaxRuleNodes) throw ResourceError("sphere_rule: node count exceeds resource limit");

  SphereRule rule;
  rule.n = n;
  std::vector<std::vector<double>> axis_weights;
  const GaussRule& g = gauss_legendre(level);
  for (int i = 0; i < n - 2; ++i) {
    const int power = n - 2 - i;
    std::vector<double> t(level), w(level);
    for (int j = 0; j < level; ++j) {
      t[j] = 0.5 * kPi * (g.nodes[j] + 1.0);
      w[j] = 0.5 * kPi * g.weights[j] * std::pow(std::sin(t[j]), power);
    }
    rule.angles.push_back(std::move(t));
    axis_weights.push_back(std::move(w));
  }
  {
    const int m = 2 * level;
    std::vector<double> t(m), w(m, 2.0 * kPi / m);
    for (int j = 0; j < m; ++j) t[j] = (j + 0.5) * 2.0 * kPi / m;
    rule.angles.push_back(std::move(t));
    axis_weights.push_back(std::move(w));
  }

  const auto total = static_cast<Eigen::Index>(count);
  rule.nodes.resize(n, total);
  rule.weights.resize(total);
  std::vector<int> idx(n - 1, 0);
  Eigen::VectorXd theta(n - 1);
  for (Eigen::Index k = 0; k < total; ++k) {
    double w = 1.0;
    for (int a = 0; a < n - 1; ++a) {
      theta(a) = rule.angles[a][idx[a]];
      w *= axis_weights[a][idx[a]];
    }
    rule.nodes.col(k) = spherical_to_cartesian(1.0, theta);
    rule.weights(k) = w;
    for (int a = n - 2; a >= 0; --a) {
      if (++idx[a] < static_cast<int>(rule.angles[a].size())) break;
      idx[a] = 0;
    }
  }
  rule.weights /= rule.weights.sum();
  return rule;
}

BallRule ball_rule(int n, int level, int radial) {
  require_dimension(n, 3, "ball_rule");
  if (radial <= 0) radial = 2 * level;
  BallRule rule;
  rule.n = n;
  rule.directions = sphere_rule(n, level);
  const Eigen::Index dirs = rule.directions.size();
  if (double(dirs) * radial > kMaxRuleNodes) throw ResourceError("ball_rule: node count exceeds resource limit");
  const GaussRule& g = gauss_legendre(radial);
  const double area = sphere_area(n);
  rule.radii.resize(radial);
  rule.nodes.resize(n, dirs * radial);
  rule.weights.resize(dirs * radial);
  for (int i = 0; i < radial; ++i) {
    const double r = 0.5 * (g.nodes[i] + 1.0);
    const double wr = 0.5 * g.weights[i] * std::pow(r, n - 1) * area;
    rule.radii[i] = r;
    rule.nodes.middleCols(i * dirs, dirs) = r * rule.directions.nodes;
    rule.weights.segment(i * dirs, dirs) = wr * rule.directions.weights;
  }
  return rule;
}

AxisFrame make_axis_frame(const Point& axis, int level) {
  const int n = static_cast<int>(axis.size());
  require_dimension(n, 3, "make_axis_frame");
  const double len = axis.norm();
  if (!(len > 0.0)) throw DomainError("make_axis_frame: zero axis");
  AxisFrame frame;
  frame.axis = axis / len;
  const SquareMatrix h = frame_with_axis(frame.axis);
  const SphereRule inner = sphere_rule(n - 1, level);
  frame.equator = h.rightCols(n - 1) * inner.nodes;
  frame.weights = inner.weights;
  return frame;
}

double focus_width(double rho) {
  if (rho <= 0.0) return 1.0;
  return std::min(1.0, (1.0 - rho) / std::sqrt(rho));
}

PolarNodes polar_nodes(int n, int level, double width, double power) {
  require_dimension(n, 3, "polar_nodes");
  if (level < 1) throw DomainError("polar_nodes: level must be >= 1");
  const GaussRule& g = gauss_legendre(level);
  const double norm = 1.0 / beta_fn(0.5 * (n - 1), 0.5);
  PolarNodes p;
  auto push = [&](double t, double dt_weight) {
    const double sh = std::sin(0.5 * t);
    p.theta.push_back(t);
    p.cos_theta.push_back(std::cos(t));
    p.sin_theta.push_back(std::sin(t));
    p.sin_half_sq.push_back(sh * sh);
    p.weight.push_back(dt_weight * std::pow(std::sin(t), n - 2) * norm);
  };
  const double half = 0.5 * kPi;
  if (power > 0.0) {
    for (int j = 0; j < level; ++j) {
      const double u = 0.5 * (g.nodes[j] + 1.0);
      const double t = half * std::pow(u, power);
      push(t, 0.5 * g.weights[j] * half * power * std::pow(u, power - 1.0));
    }
  } else {
    const double d = std::max(width, 1e-300);
    const double vmax = std::asinh(half / d);
    for (int j = 0; j < level; ++j) {
      const double v = 0.5 * vmax * (g.nodes[j] + 1.0);
      push(d * std::sinh(v), 0.5 * vmax * g.weights[j] * d * std::cosh(v));
    }
  }
  for (int j = 0; j < level; ++j) {
    push(half + 0.5 * half * (g.nodes[j] + 1.0), 0.5 * half * g.weights[j]);
  }
  return p;
}

}  // namespace polypotential
