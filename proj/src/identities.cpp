#include "polypotential/identities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "polypotential/errors.hpp"
#include "polypotential/kernels.hpp"
#include "polypotential/parallel.hpp"
#include "polypotential/quadrature.hpp"
#include "polypotential/radial_oracle.hpp"
#include "polypotential/specfun.hpp"

namespace polypotential {

namespace {

constexpr double kPi = std::numbers::pi;

std::mt19937_64 make_rng(std::uint64_t seed, int n, int tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

std::vector<Point> random_points(std::mt19937_64& rng, int n, int count, double rmax) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    Point p(n);
    for (int c = 0; c < n; ++c) p(c) = g(rng);
    pts.push_back(rmax * std::pow(u(rng), 1.0 / n) * p.normalized());
  }
  return pts;
}

std::vector<double> as_vector(const Point& p) { return {p.data(), p.data() + p.size()}; }

struct Worst {
  double rel = -1.0;
  double closed = 0.0;
  double quad = 0.0;
  std::vector<double> point;

  void offer(double c, double q, const std::vector<double>& pt = {}) {
    const double r = relative_error(q, c);
    if (!(r <= rel)) {  // NaN wins
      rel = r;
      closed = c;
      quad = q;
      point = pt;
    }
  }
};

IdentityRow finish(std::string name, int n, int samples, const Worst& w, double tol) {
  IdentityRow row;
  row.identity = std::move(name);
  row.n = n;
  row.samples = samples;
  row.closed_form = w.closed;
  row.quadrature = w.quad;
  row.rel_error = w.rel;
  row.tolerance = tol;
  row.pass = w.rel <= tol;
  row.worst_point = w.point;
  return row;
}

// Quadrature of a kernel identity over random interior points.
template <typename Integrand, typename Closed>
IdentityRow green_identity(const std::string& name, int n, const std::vector<Point>& pts, const GreenBudget& budget,
                           double tol, Integrand integrand, Closed closed) {
  std::vector<double> quad(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { quad[i] = green_integrate(pts[i], integrand, budget).value; });
  Worst w;
  for (std::size_t i = 0; i < pts.size(); ++i) w.offer(closed(pts[i]), quad[i], as_vector(pts[i]));
  return finish(name, n, static_cast<int>(pts.size()), w, tol);
}

}  // namespace

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

std::vector<IdentityRow> identity_suite(int n, const IdentityOptions& opt) {
  if (n < 3 || n > 5) throw DomainError("identity_suite: n must lie in {3, 4, 5}");
  if (opt.samples < 1) throw DomainError("identity_suite: samples must be positive");
  const double tol = opt.tolerance.value_or(n == 5 ? 5e-3 : 1e-3);
  const GreenBudget budget = opt.budget.value_or(n == 5 ? GreenBudget{16, 32} : GreenBudget{24, 48});
  const KernelContext ctx(n);
  std::vector<IdentityRow> rows;

  {
    auto rng = make_rng(opt.seed, n, 1);
    const auto pts = random_points(rng, n, opt.samples, 0.95);
    rows.push_back(green_identity(
        "green_mass", n, pts, budget, tol, [](const Point&) { return 1.0; },
        [&](const Point& x) { return (1.0 - x.squaredNorm()) / (2.0 * n); }));
    rows.push_back(green_identity(
        "weighted_mass_I1", n, pts, budget, tol, [](const Point& y) { return 1.0 - y.squaredNorm(); },
        [&](const Point& x) {
          const double t = x.squaredNorm();
          return (n + 4.0 - n * t) * (1.0 - t) / (4.0 * n * (n + 2.0));
        }));
  }

  {
    // G[1 - t] = (n + 4 - n t)(1 - t) / (4n(n+2)) in exact arithmetic
    const RadialPoly<Rational> lhs = green_apply(RadialPoly<Rational>(n, {Rational(1), Rational(-1)}));
    const Rational d(4 * n * (n + 2));
    const RadialPoly<Rational> rhs(n, {Rational(n + 4) / d, Rational(-2 * n - 4) / d, Rational(n) / d});
    Worst w;
    w.rel = lhs == rhs ? 0.0 : 1.0;
    w.closed = rhs.evaluate(Rational(0)).convert_to<double>();
    w.quad = lhs.evaluate(Rational(0)).convert_to<double>();
    rows.push_back(finish("weighted_mass_symbolic", n, 1, w, 0.0));
  }

  {
    Worst w;
    const double norm = beta_fn(0.5 * (n - 1), 0.5);
    const std::vector<double> radii = {0.0, 0.3, 0.7, 0.9};
    for (double s : radii) {
      Point x = Point::Zero(n);
      x(n - 1) = s;
      const double hyp = sphere_moment(ctx, x, 1.0);
      const double series = sphere_moment_series(ctx, s);
      const double quad = integrate_adaptive(
                              [&](double t) {
                                const double h = std::sin(0.5 * t);
                                return std::pow(std::sin(t), n - 2) *
                                       std::pow((1 - s) * (1 - s) + 4 * s * h * h, -0.5 * (n + 4));
                              },
                              0.0, kPi)
                              .value /
                          norm;
      w.offer(hyp, quad, as_vector(x));
      w.offer(hyp, series, as_vector(x));
      w.offer(series, quad, as_vector(x));
    }
    rows.push_back(finish("sphere_moment", n, static_cast<int>(radii.size()), w, 1e-6));
  }

  {
    auto rng = make_rng(opt.seed, n, 2);
    std::uniform_real_distribution<double> ul1(1.2, 6.0), ul2(0.2, 4.0), ur(0.0, 0.9);
    Worst w;
    for (int i = 0; i < 20; ++i) {
      const double l1 = ul1(rng), l2 = ul2(rng), r = ur(rng);
      const double closed = sphere_singular_integral(l1, l2, r);
      const double quad = integrate_adaptive(
                              [&](double t) {
                                const double h = std::sin(0.5 * t);
                                return std::pow(std::sin(t), l1 - 1) * std::pow((1 - r) * (1 - r) + 4 * r * h * h, -l2);
                              },
                              0.0, kPi)
                              .value;
      w.offer(closed, quad, {l1, l2, r});
    }
    rows.push_back(finish("polar_integral", n, 20, w, 1e-8));
  }

  {
    // Phi(1) from one-sided differences of U(rN) at r = 1, where U = 1; Richardson in h.
    auto slope = [&](double h) { return (1.0 - harmonic_measure_U(ctx, 1.0 - h)) / h; };
    const double h = 1e-2;
    const double fd = 2.0 * slope(0.5 * h) - slope(h);
    Worst w;
    w.offer(heinz_constant(n), fd);
    rows.push_back(finish("heinz_constant", n, 1, w, 1e-3));
  }

  {
    // Phi strictly decreasing on a 50-point grid; rel_error is the largest relative increase.
    Worst w;
    w.rel = 0.0;
    w.closed = phi_derivative(ctx, 1.0);
    double prev = phi_derivative(ctx, 0.0);
    double lowest = prev;
    bool strict = true;
    for (int i = 1; i < 50; ++i) {
      const double r = i / 49.0;
      const double p = phi_derivative(ctx, r);
      if (!(p < prev)) {
        strict = false;
        w.rel = std::max(w.rel, relative_error(p, prev));
      }
      lowest = std::min(lowest, p);
      prev = p;
    }
    w.quad = lowest;
    IdentityRow row = finish("phi_decreasing", n, 50, w, 0.0);
    row.pass = strict;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace polypotential
