// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "polypotential/inequality_lab.hpp"
#include "polypotential/kernels.hpp"
#include "polypotential/radial_oracle.hpp"
#include "polypotential/solver.hpp"
#include "polypotential/specfun.hpp"

using namespace polypotential;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::vector<Point> sample_ball(int n, int count, double rmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) {
    Point p(n);
    for (int c = 0; c < n; ++c) p(c) = g(rng);
    out.push_back(rmax * std::pow(u(rng), 1.0 / n) * p.normalized());
  }
  return out;
}

std::vector<Point> sample_sphere(int n, int count, std::uint64_t seed) {
  auto pts = sample_ball(n, count, 1.0, seed);
  for (auto& p : pts) p.normalize();
  return pts;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Eigen::VectorXd unit(int dim, int i) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v(i) = 1.0;
  return v;
}

Datum scalar(double v) { return Datum::constant(Eigen::VectorXd::Constant(1, v)); }

ProblemSpec problem(int n, int target_dim, std::vector<Datum> phi) {
  ProblemSpec p;
  p.n = n;
  p.m = static_cast<int>(phi.size()) - 1;
  p.target_dim = target_dim;
  p.phi = std::move(phi);
  p.budget = default_solver_budget(n);
  return p;
}

// Worst relative error of green_integrate against a closed form over 20 points.
template <typename F, typename C>
double green_identity_error(int n, std::uint64_t seed, F integrand, C closed) {
  double worst = 0.0;
  for (const Point& x : sample_ball(n, 20, 0.95, seed)) {
    worst = std::max(worst, rel(green_integrate(x, integrand).value, closed(x)));
  }
  return worst;
}

Outcome c1_green_mass() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int n : {3, 4}) {
    worst = std::max(worst, green_identity_error(n, 100 + n, [](const Point&) { return 1.0; },
                                                 [&](const Point& x) { return (1 - x.squaredNorm()) / (2.0 * n); }));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-3 && secs <= 60.0, "max rel. err " + fmt(worst) + ", " + fmt(secs) + " s"};
}

Outcome c2_weighted_mass() {
  double worst = 0.0;
  bool symbolic = true;
  for (int n : {3, 4}) {
    worst = std::max(worst, green_identity_error(
                                n, 200 + n, [](const Point& y) { return 1.0 - y.squaredNorm(); },
                                [&](const Point& x) {
                                  const double t = x.squaredNorm();
                                  return (n + 4 - n * t) * (1 - t) / (4.0 * n * (n + 2));
                                }));
    const Rational d(4 * n * (n + 2));
    const RadialPoly<Rational> expected(n, {Rational(n + 4) / d, Rational(-2 * n - 4) / d, Rational(n) / d});
    symbolic = symbolic && green_apply(RadialPoly<Rational>(n, {Rational(1), Rational(-1)})) == expected;
  }
  return {worst <= 1e-3 && symbolic,
          "max rel. err " + fmt(worst) + ", symbolic " + (symbolic ? "exact" : "mismatch")};
}

Outcome c3_moment() {
  const int n = 3;
  const KernelContext ctx(n);
  double worst = 0.0;
  for (double s : {0.0, 0.3, 0.7, 0.9}) {
    Point x = Point::Zero(n);
    x(0) = s;
    const double hyp = sphere_moment(ctx, x, 1.0);
    const double series = sphere_moment_series(ctx, s);
    // normalized sphere mean of |s e - zeta|^{-(n+4)} by polar reduction
    const double quad =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double t) {
              const double h = std::sin(0.5 * t);
              return std::pow(std::sin(t), n - 2) * std::pow((1 - s) * (1 - s) + 4 * s * h * h, -0.5 * (n + 4));
            },
            0.0, kPi, 15, 1e-14) /
        boost::math::beta(0.5 * (n - 1), 0.5);
    worst = std::max({worst, rel(hyp, quad), rel(series, quad), rel(hyp, series)});
  }
  return {worst <= 1e-6, "max mutual rel. diff " + fmt(worst)};
}

Outcome c4_polar_integral() {
  std::mt19937_64 rng(400);
  std::uniform_real_distribution<double> ul1(1.2, 6.0), ul2(0.2, 4.0), ur(0.0, 0.9);
  boost::math::quadrature::tanh_sinh<double> ts;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double l1 = ul1(rng), l2 = ul2(rng), r = ur(rng);
    const double direct = ts.integrate(
        [&](double t) {
          const double h = std::sin(0.5 * t);
          return std::pow(std::sin(t), l1 - 1) * std::pow((1 - r) * (1 - r) + 4 * r * h * h, -l2);
        },
        0.0, kPi);
    worst = std::max(worst, rel(sphere_singular_integral(l1, l2, r), direct));
  }
  return {worst <= 1e-8, "max rel. err " + fmt(worst)};
}

Outcome c5_solver() {
  const int n = 3;
  double worst = 0.0;
  bool sign = true;
  for (int m : {2, 3}) {
    const auto o = polyharmonic_oracle(n, m, Rational(1));
    std::vector<Datum> phi;
    for (const Rational& b : o.boundary) {
      const double v = b.convert_to<double>();
      phi.push_back(v == 0.0 ? Datum::zero() : scalar(v));
    }
    phi.push_back(Datum::zero());  // Delta^m (1 - t^{m-1}) = 0
    const Solver s(problem(n, 1, phi));
    for (const Point& x : sample_ball(n, 30, 0.9, 500 + m)) {
      const double exact = o.f.evaluate(Rational(x.squaredNorm())).convert_to<double>();
      worst = std::max(worst, std::abs(s.solve(x).value(0) - exact));
    }
    // f(0) = M = +1 fixes the sign of the chain
    const double f0 = s.solve(Point::Zero(n)).value(0);
    sign = sign && std::abs(f0 - 1.0) <= 1e-2;
  }
  return {worst <= 1e-2 && sign, "sup err " + fmt(worst) + ", sign " + (sign ? "+" : "wrong")};
}

Outcome c6_heinz() {
  const KernelContext ctx(3);
  const double closed = heinz_constant(3);
  // one-sided differences of U(rN) at r = 1, Richardson in h
  auto slope = [&](double h) { return (1.0 - harmonic_measure_U(ctx, 1.0 - h)) / h; };
  const double fd = 2.0 * slope(5e-3) - slope(1e-2);
  // at n = 3, U(rN) = (1 - (1 - r^2)/sqrt(1 + r^2)) / r, so Phi(1) = sqrt 2 - 1
  const double exact = std::sqrt(2.0) - 1.0;
  bool decreasing = true;
  double prev = phi_derivative(ctx, 0.0);
  for (int i = 1; i < 50; ++i) {
    const double p = phi_derivative(ctx, i / 49.0);
    decreasing = decreasing && p < prev;
    prev = p;
  }
  const bool ok = std::abs(closed - fd) <= 1e-3 && std::abs(closed - exact) <= 1e-12 && decreasing;
  return {ok, "L(3) " + fmt(closed) + ", FD " + fmt(fd) + ", Phi " + (decreasing ? "decreasing" : "not decreasing")};
}

Outcome c7_schwarz() {
  const int n = 3;
  Eigen::Matrix3d q = Eigen::AngleAxisd(0.9, Eigen::Vector3d(1, -1, 2).normalized()).toRotationMatrix();
  const std::vector<ProblemSpec> sets = {
      problem(n, 3, {Datum::identity(), Datum::zero(), Datum::zero()}),
      problem(n, 1, {Datum::hemisphere_sign(unit(1, 0)), scalar(1.0), Datum::zero()}),
      problem(n, 1, {Datum::coordinate(2, unit(1, 0)), Datum::hemisphere_sign(unit(1, 0)),
                     Datum::radial_poly({1.0, -1.0}, unit(1, 0))}),
      problem(n, 1, {Datum::zero(), scalar(-6.0), Datum::zero()}),
      problem(n, 3, {Datum::linear(q), Datum::identity(), Datum::constant(Eigen::Vector3d(0.5, -1.0, 2.0))}),
  };
  std::size_t checked = 0, violations = 0;
  double worst_slack = 1e300;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const Solver s(sets[i]);
    auto pts = sample_ball(n, 180, 1.0, 700 + i);
    for (const Point& p : sample_sphere(n, 20, 750 + i)) pts.push_back(p);
    const BoundsReport r = schwarz_bound_check(s, [&](const Point& x) { return s.solve(x, {12, 24}); }, pts);
    checked += r.entries.size();
    violations += r.violations();
    for (const auto& e : r.entries) worst_slack = std::min(worst_slack, e.bound - e.value);
  }
  return {violations == 0 && checked == 1000,
          std::to_string(checked) + " samples, " + std::to_string(violations) + " violations, min slack " +
              fmt(worst_slack)};
}

Outcome c8_gradient() {
  const int n = 3;
  const Solver s(problem(n, 1, {Datum::zero(), Datum::hemisphere_sign(unit(1, 0)), Datum::coordinate(0, unit(1, 0)),
                                Datum::radial_poly({2.0, -1.0}, unit(1, 0))}));
  auto pts = sample_ball(n, 40, 0.97, 800);
  for (const Point& p : sample_sphere(n, 10, 801)) pts.push_back(p);
  GradientOptions opt;
  opt.budget = {8, 16};
  std::size_t violations = 0;
  for (int k = 1; k <= 3; ++k) violations += gradient_bound_check(s, k, pts, opt).violations();

  // phi_1 = -2n: G_1 = -(1 - |x|^2), |D| = 2 = ||phi_1||/n on the sphere
  const Solver c(problem(n, 1, {Datum::zero(), scalar(-6.0), Datum::zero()}));
  const BoundsReport eq = gradient_bound_check(c, 1, sample_sphere(n, 5, 802));
  bool equality = eq.all_pass();
  double worst = 0.0;
  for (const auto& e : eq.entries) {
    worst = std::max(worst, std::abs(e.value - 2.0));
    equality = equality && e.bound == 2.0 && std::abs(e.value - 2.0) <= std::max(1e-3, e.error_bar);
  }
  return {violations == 0 && equality, std::to_string(3 * pts.size()) + " checks, " + std::to_string(violations) +
                                           " violations; boundary |D| - 2 = " + fmt(worst)};
}

Outcome c9_i2() {
  const int n = 3;
  auto pts = sample_ball(n, 20, 0.97, 900);
  const BoundsReport r = I2_bound_check(n, pts);
  double largest = 0.0;
  for (const auto& e : r.entries)
    if (e.label == "I2<=delta") largest = std::max(largest, e.value);
  const bool ok = std::abs(c0() - 2.631) <= 1e-3 && std::abs(delta_n(3) - 0.8815) <= 1e-4 && r.all_pass();
  return {ok, "c0 " + fmt(c0()) + ", delta(3) " + fmt(delta_n(3)) + ", max I2 " + fmt(largest) + ", " +
                  std::to_string(r.violations()) + " violations"};
}

Outcome c10_lipschitz() {
  const ConstantsReport base = lipschitz_constants({3, 1.0, 1.0, {0.0, 0.0}});
  const bool exact = base.M1 == 1.0 && base.N1 == 0.0;
  double last = 0.0;
  bool shrinking = true;
  double prev = 1e300;
  for (double scale : {1.0, 1e-1, 1e-2, 1e-4, 1e-8, 1e-12}) {
    last = lipschitz_constants({3, 1.5, std::nullopt, {scale, scale, scale}}).N1;
    shrinking = shrinking && last <= prev;
    prev = last;
  }
  shrinking = shrinking && last <= 1e-10;
  double worst = 0.0;
  for (int n : {3, 4})
    for (double K : {1.0, 1.2, 2.0}) worst = std::max(worst, rel(mu1_integral_quadrature(n, K).value, mu1_integral(n, K)));
  return {exact && shrinking && worst <= 1e-4, std::string("M1 = ") + fmt(base.M1) + ", N1 = " + fmt(base.N1) +
                                                   ", N1 -> " + fmt(last) + ", mu1 rel. diff " + fmt(worst)};
}

Outcome c11_jacobian() {
  bool ok = true;
  double spread = 0.0;
  for (const auto& th : {Eigen::Vector2d(1.1, 2.3), Eigen::Vector2d(0.4, 5.0), Eigen::Vector2d(2.7, 0.2)}) {
    const BoundaryJacobian b = boundary_jacobian_bounds(Datum::identity(), th, {0.0, 0.0}, 1.0);
    spread = std::max({spread, std::abs(b.lower - 1.0), std::abs(b.upper - 1.0)});
    ok = ok && b.report.all_pass();
  }
  return {ok && spread <= 1e-3, "max |bound - 1| " + fmt(spread)};
}

Outcome c12_determinism() {
  const fs::path dir = fs::temp_directory_path() / "polypotential_acceptance";
  fs::create_directories(dir);
  const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
  const std::string base = std::string(POLYPOTENTIAL_CLI) + " identities --n 3,4 --seed 12 --out ";
  const int ra = std::system((base + a).c_str());
  const int rb = std::system(("POLYPOTENTIAL_THREADS=2 " + base + b).c_str());
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  const std::string ta = slurp(a), tb = slurp(b);
  const bool ok = WIFEXITED(ra) && WEXITSTATUS(ra) == 0 && WIFEXITED(rb) && WEXITSTATUS(rb) == 0 && !ta.empty() &&
                  ta == tb;
  return {ok, std::to_string(ta.size()) + " bytes, " + (ta == tb ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"green mass identity", c1_green_mass},
      {"weighted mass I1 identity", c2_weighted_mass},
      {"n+4 sphere moment three ways", c3_moment},
      {"polar singular integral", c4_polar_integral},
      {"solver radial oracles", c5_solver},
      {"Heinz constant", c6_heinz},
      {"Schwarz-type bound", c7_schwarz},
      {"gradient bounds", c8_gradient},
      {"I2 <= delta(n)", c9_i2},
      {"Lipschitz constants", c10_lipschitz},
      {"boundary Jacobian", c11_jacobian},
      {"determinism", c12_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ("
              << o.detail << ")" << std::endl;
  }
  return failed ? 1 : 0;
}
