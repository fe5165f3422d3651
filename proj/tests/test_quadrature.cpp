#include "doctest.h"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "polypotential/green_integrate.hpp"
#include "polypotential/kernels.hpp"
#include "polypotential/quadrature.hpp"
#include "polypotential/radial_oracle.hpp"

using namespace polypotential;

namespace {

Point random_interior(std::mt19937_64& rng, int n, double max_radius) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point p(n);
  for (int i = 0; i < n; ++i) p(i) = g(rng);
  p.normalize();
  return p * (max_radius * std::pow(u(rng), 1.0 / n));
}

}  // namespace

TEST_CASE("gauss legendre") {
  const GaussRule& g = gauss_legendre(20);
  double s = 0;
  for (double w : g.weights) s += w;
  CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
  // exact for degree 39
  CHECK(integrate_gauss([](double x) { return std::pow(x, 38); }, -1.0, 1.0, 20) ==
        doctest::Approx(2.0 / 39.0).epsilon(1e-13));
  CHECK(integrate_gauss([](double x) { return std::exp(x); }, 0.0, 2.0, 12) ==
        doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-14));
  CHECK_THROWS_AS(gauss_legendre(0), DomainError);
}

TEST_CASE("adaptive integration") {
  const Estimate e = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0);
  CHECK(e.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  const Estimate p = integrate_adaptive([](double x) { return 1.0 / (1e-6 + x * x); }, -1.0, 1.0);
  CHECK(p.value == doctest::Approx(2e3 * std::atan(1e3)).epsilon(1e-11));
}

TEST_CASE("spherical chart") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd t0 = Eigen::VectorXd::Zero(2);
  const Point pole = spherical_to_cartesian(1.0, t0);
  CHECK(pole(0) == doctest::Approx(1.0));
  CHECK(pole.tail(2).norm() == doctest::Approx(0.0));

  for (int n : {3, 4, 5}) {
    for (int i = 0; i < 30; ++i) {
      Eigen::VectorXd th(n - 1);
      for (int k = 0; k < n - 2; ++k) th(k) = 0.05 + 3.0 * u(rng);
      th(n - 2) = 0.05 + 6.1 * u(rng);
      const double r = u(rng);
      const Point x = spherical_to_cartesian(r, th);
      CHECK(x.norm() == doctest::Approx(r).epsilon(1e-14));
      const SphericalCoords back = cartesian_to_spherical(x);
      CHECK(back.r == doctest::Approx(r));
      CHECK((back.theta - th).norm() < 1e-10);
    }
  }
  // Jacobian by finite differences
  const double h = 1e-6;
  for (int n : {3, 4}) {
    for (int i = 0; i < 10; ++i) {
      Eigen::VectorXd th(n - 1);
      for (int k = 0; k < n - 2; ++k) th(k) = 0.3 + 2.5 * u(rng);
      th(n - 2) = 0.3 + 5.5 * u(rng);
      const double r = 0.2 + 0.7 * u(rng);
      SquareMatrix d(n, n);
      d.col(0) = (spherical_to_cartesian(r + h, th) - spherical_to_cartesian(r - h, th)) / (2 * h);
      for (int k = 0; k < n - 1; ++k) {
        Eigen::VectorXd tp = th, tm = th;
        tp(k) += h;
        tm(k) -= h;
        d.col(k + 1) = (spherical_to_cartesian(r, tp) - spherical_to_cartesian(r, tm)) / (2 * h);
      }
      CHECK(std::abs(d.determinant()) == doctest::Approx(spherical_jacobian(r, th)).epsilon(1e-7));
    }
  }
  Eigen::VectorXd bad(2);
  bad << 4.0, 1.0;
  CHECK_THROWS_AS(spherical_to_cartesian(1.0, bad), DomainError);
  bad << 1.0, 7.0;
  CHECK_THROWS_AS(spherical_to_cartesian(1.0, bad), DomainError);
}

TEST_CASE("sphere rule moments") {
  for (int n : {3, 4, 5}) {
    const SphereRule s = sphere_rule(n, 16);
    CHECK(s.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.weights.minCoeff() > 0.0);
    for (Eigen::Index i = 0; i < s.size(); ++i) CHECK(std::abs(s.nodes.col(i).norm() - 1.0) < 1e-12);
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(integrate(s, [&](const auto& z) { return z(i); })) < 1e-12);
      CHECK(integrate(s, [&](const auto& z) { return z(i) * z(i); }) == doctest::Approx(1.0 / n).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(sphere_rule(9, 200), ResourceError);
}

TEST_CASE("ball rule moments") {
  for (int n : {3, 4, 5}) {
    const BallRule b = ball_rule(n, 8);
    const double vol = std::pow(std::numbers::pi, 0.5 * n) / boost::math::tgamma(0.5 * n + 1);
    CHECK(b.weights.sum() == doctest::Approx(vol).epsilon(1e-12));
    CHECK(integrate(b, [](const auto& y) { return y.squaredNorm(); }) ==
          doctest::Approx(vol * n / (n + 2.0)).epsilon(1e-10));
    for (int i = 0; i < n; ++i) CHECK(std::abs(integrate(b, [&](const auto& y) { return y(i); })) < 1e-12);
    CHECK(b.weights.minCoeff() > 0.0);
  }
}

TEST_CASE("polar nodes") {
  for (int n : {3, 4, 5}) {
    for (double width : {1.0, 0.1, 1e-3}) {
      const PolarNodes p = polar_nodes(n, 24, width);
      double s = 0;
      for (double w : p.weight) s += w;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("green integrate against closed forms") {
  std::mt19937_64 rng(22);
  for (int n : {3, 4}) {
    const KernelContext ctx(n);
    const RadialPoly<double> t = RadialPoly<double>::monomial(n, 1);
    const RadialPoly<double> g_t = green_apply(t);
    for (int i = 0; i < 6; ++i) {
      const Point x = random_interior(rng, n, 0.95);
      const Estimate mass = green_integrate(x, [](const Point&) { return 1.0; });
      CHECK(mass.value == doctest::Approx(green_mass(ctx, x)).epsilon(1e-3));
      const Estimate i1 = green_integrate(x, [](const Point& y) { return 1.0 - y.squaredNorm(); });
      CHECK(i1.value == doctest::Approx(weighted_green_mass_I1(ctx, x)).epsilon(1e-3));
      const Estimate sq = green_integrate(x, [](const Point& y) { return y.squaredNorm(); });
      CHECK(sq.value == doctest::Approx(g_t.evaluate(x.squaredNorm())).epsilon(1e-3));
    }
  }
}

TEST_CASE("green integrate refinement and linearity") {
  std::mt19937_64 rng(23);
  const Point x = random_interior(rng, 3, 0.7);
  auto f1 = [](const Point& y) { return y(0) * y(1) + 0.5; };
  auto f2 = [](const Point& y) { return std::cos(y(2)); };
  GreenBudget b{12, 24};
  const Estimate a1 = green_integrate(x, f1, b);
  const Estimate a2 = green_integrate(x, f2, b);
  const Estimate c = green_integrate(x, [&](const Point& y) { return 2.0 * f1(y) - 3.0 * f2(y); }, b);
  CHECK(c.value == doctest::Approx(2.0 * a1.value - 3.0 * a2.value).epsilon(1e-12));

  const Estimate fine = green_integrate(x, f1, GreenBudget{18, 36});
  CHECK(std::abs(fine.value - a1.value) <= a1.error + 1e-14);
}

TEST_CASE("green integrate versus naive quadrature with pole exclusion") {
  // Dense product rule in the original coordinates; nodes within 1e-9 of the
  // pole are skipped. Its error is dominated by the unresolved pole.
  const int n = 3;
  const KernelContext ctx(n);
  Point x(3);
  x << 0.2, -0.1, 0.3;
  auto f = [](const Point& y) { return 1.0 + y(0); };
  const BallRule b = ball_rule(n, 40, 120);
  double naive = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const Point y = b.nodes.col(i);
    if ((y - x).norm() < 1e-9) continue;
    naive += b.weights(i) * green(ctx, x, y) * f(y);
  }
  const Estimate m = green_integrate(x, f);
  CHECK(m.value == doctest::Approx(naive).epsilon(5e-3));
}

TEST_CASE("monte carlo estimator") {
  Point x(3);
  x << 0.3, 0.1, -0.4;
  const KernelContext ctx(3);
  const Estimate mc = green_integrate_mc(x, [](const Point& y) { return 1.0 - y.squaredNorm(); }, 200000, 7);
  CHECK(std::abs(mc.value - weighted_green_mass_I1(ctx, x)) < 5 * mc.error + 1e-12);
  const Estimate again = green_integrate_mc(x, [](const Point& y) { return 1.0 - y.squaredNorm(); }, 200000, 7);
  CHECK(again.value == mc.value);
  // constant integrand: the control variate makes the estimate exact
  const Estimate c = green_integrate_mc(x, [](const Point&) { return 1.0; }, 1000, 3);
  CHECK(c.value == doctest::Approx(green_mass(ctx, x)).epsilon(1e-12));
}

TEST_CASE("green integrate errors") {
  Point x(3);
  x << 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(green_integrate(x, [](const Point&) { return 1.0; }), DomainError);
  Point y = Point::Zero(3);
  CHECK_THROWS_AS(green_integrate(y, [](const Point&) { return std::nan(""); }), DomainError);
  Point z(3);
  z << 0.5, 0.0, 0.0;
  CHECK_THROWS_AS(green_integrate(z, [](const Point& p) { return std::exp(40 * p(0)); }, GreenBudget{4, 4}, 1e-12),
                  BudgetExhausted);
}
