#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "polypotential/kernels.hpp"
#include "polypotential/quadrature.hpp"
#include "polypotential/specfun.hpp"

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

Point random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Point p(n);
  for (int i = 0; i < n; ++i) p(i) = g(rng);
  return p.normalized();
}

}  // namespace

TEST_CASE("kernel context") {
  const KernelContext c3(3);
  CHECK(c3.omega == doctest::Approx(4 * std::numbers::pi));
  CHECK(c3.c_n == doctest::Approx(1.0 / (4 * std::numbers::pi)));
  CHECK_THROWS_AS(KernelContext(2), DomainError);
}

TEST_CASE("green function") {
  const KernelContext ctx(3);
  Point y(3);
  y << 0.0, 0.5, 0.0;
  CHECK(green(ctx, Point::Zero(3), y) == doctest::Approx(1.0 / (4 * std::numbers::pi)));
  std::mt19937_64 rng(31);
  for (int n : {3, 4, 5}) {
    const KernelContext k(n);
    for (int i = 0; i < 50; ++i) {
      const Point a = random_interior(rng, n, 0.99);
      const Point b = random_interior(rng, n, 0.99);
      CHECK(green(k, a, b) > 0.0);
      CHECK(green(k, a, b) == doctest::Approx(green(k, b, a)).epsilon(1e-12));
      const Point near_boundary = random_unit(rng, n) * (1.0 - 1e-4);
      const Point c = random_interior(rng, n, 0.5);
      CHECK(std::abs(green(k, c, near_boundary)) < 1e-8 * std::max(1.0, green(k, c, Point::Zero(n))) * 1e4);
    }
  }
  CHECK_THROWS_AS(green(ctx, y, y), DomainError);
  Point out(3);
  out << 1.2, 0, 0;
  CHECK_THROWS_AS(green(ctx, y, out), DomainError);
}

TEST_CASE("green vanishes at the boundary") {
  // G(x, rho zeta) = O(1 - rho) as rho -> 1.
  std::mt19937_64 rng(32);
  const KernelContext ctx(3);
  for (int i = 0; i < 20; ++i) {
    const Point x = random_interior(rng, 3, 0.5);
    const Point z = random_unit(rng, 3);
    CHECK(green(ctx, x, Point(z * (1 - 1e-4))) < 1e-3 * 1e-1);
    CHECK(green(ctx, x, Point(z * (1 - 1e-8))) < 1e-8);
  }
}

TEST_CASE("poisson kernel") {
  std::mt19937_64 rng(33);
  for (int n : {3, 4}) {
    const KernelContext ctx(n);
    const SphereRule s = sphere_rule(n, 24);
    for (int i = 0; i < 10; ++i) {
      const Point z = random_unit(rng, n);
      CHECK(poisson(ctx, Point::Zero(n), z) == doctest::Approx(1.0));
      const Point x = random_interior(rng, n, 0.6);
      CHECK(poisson(ctx, x, z) >= 0.0);
      const double total = integrate(s, [&](const auto& zeta) { return poisson(ctx, x, Point(zeta)); });
      CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
  const KernelContext ctx(3);
  Point z(3);
  z << 1.0 + 1e-9, 0, 0;
  CHECK_THROWS_AS(poisson(ctx, Point::Zero(3), z), DomainError);
}

TEST_CASE("green gradient") {
  std::mt19937_64 rng(34);
  const double h = 1e-6;
  for (int n : {3, 4}) {
    const KernelContext ctx(n);
    for (int i = 0; i < 20; ++i) {
      const Point x = random_interior(rng, n, 0.8);
      const Point y = random_interior(rng, n, 0.8);
      if ((x - y).norm() < 0.1) continue;
      const Point g = grad_green(ctx, x, y);
      for (int j = 0; j < n; ++j) {
        Point e = Point::Zero(n);
        e(j) = h;
        const double fd = (green(ctx, Point(x + e), y) - green(ctx, Point(x - e), y)) / (2 * h);
        CHECK(g(j) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      }
      const double bound = (std::pow((x - y).norm(), 1 - n) +
                            std::pow((y.squaredNorm() * x - y).norm(), 1 - n)) / ctx.omega;
      CHECK(g.norm() <= bound * (1 + 1e-12));
    }
    // y = 0: radial derivative of c_n (|x|^{2-n} - 1) is -(n-2) c_n |x|^{1-n} x/|x|.
    const Point x = random_interior(rng, n, 0.9);
    const Point expected = -(n - 2) * ctx.c_n * std::pow(x.norm(), -n) * x;
    Point y0 = Point::Zero(n);
    CHECK((grad_green(ctx, x, y0) - expected).norm() < 1e-12 * expected.norm());
  }
}

TEST_CASE("closed-form masses") {
  const KernelContext ctx(3);
  CHECK(green_mass(ctx, Point::Zero(3)) == doctest::Approx(1.0 / 6.0));
  CHECK(weighted_green_mass_I1(ctx, Point::Zero(3)) == doctest::Approx(7.0 / 60.0));
  std::mt19937_64 rng(35);
  for (int n : {3, 4, 5}) {
    const KernelContext k(n);
    for (int i = 0; i < 20; ++i) {
      const Point x = random_interior(rng, n, 0.999);
      CHECK(weighted_green_mass_I1(k, x) <= (n + 4.0) * (1 - x.squaredNorm()) / (4.0 * n * (n + 2)) + 1e-15);
    }
    Point edge = Point::Zero(n);
    edge(0) = 1 - 1e-12;
    CHECK(green_mass(k, edge) < 1e-11);
  }
}

TEST_CASE("sphere moments") {
  const KernelContext ctx(3);
  Point x(3);
  x << 0.0, 0.0, 0.0;
  CHECK(sphere_moment(ctx, x, 0.7) == doctest::Approx(1.0));
  CHECK(sphere_moment_series(ctx, 0.0) == doctest::Approx(1.0));
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9, 0.95}) {
    Point p(3);
    p << 0.0, s, 0.0;
    CHECK(sphere_moment(ctx, p, 1.0) == doctest::Approx(sphere_moment_series(ctx, s)).epsilon(1e-10));
  }
  // defining integral by polar reduction
  auto polar = [](int n, double s, double power) {
    const double norm = 1.0 / beta_fn(0.5 * (n - 1), 0.5);
    return norm * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                      [&](double t) {
                        const double h = std::sin(0.5 * t);
                        return std::pow(std::sin(t), n - 2) * std::pow((1 - s) * (1 - s) + 4 * s * h * h, -0.5 * power);
                      },
                      0.0, std::numbers::pi, 15, 1e-14);
  };
  for (int n : {3, 4, 5}) {
    const KernelContext k(n);
    Point p = Point::Zero(n);
    p(0) = 0.5;
    CHECK(sphere_moment(k, p, 1.0) == doctest::Approx(polar(n, 0.5, n + 4)).epsilon(1e-10));
    CHECK(sphere_moment(k, p, 1.0, false) == doctest::Approx(polar(n, 0.5, n + 3)).epsilon(1e-10));
  }
  Point q(3);
  q << 0.8, 0.0, 0.0;
  CHECK_THROWS_AS(sphere_moment(ctx, q, 1.25), DomainError);
}

TEST_CASE("harmonic measure U and Phi") {
  for (int n : {3, 4, 5}) {
    const KernelContext ctx(n);
    CHECK(harmonic_measure_U(ctx, 0.0) == 0.0);
    double prev = 0.0;
    for (double r : {0.1, 0.5, 0.9, 0.99}) {
      const double u = harmonic_measure_U(ctx, r);
      CHECK(u > prev);
      CHECK(u < 1.0);
      prev = u;
    }
    CHECK(harmonic_measure_U(ctx, 0.999) > 0.99);
    CHECK(phi_derivative(ctx, 1.0) == doctest::Approx(heinz_constant(n)).epsilon(1e-9));

    // Phi decreasing and bounded below by Phi(1)
    double last = phi_derivative(ctx, 0.0);
    for (int i = 1; i < 50; ++i) {
      const double r = i / 50.0;
      const double p = phi_derivative(ctx, r);
      CHECK(p < last);
      CHECK(p >= heinz_constant(n));
      last = p;
    }
    // Phi against central differences of U
    for (double r : {0.2, 0.6, 0.9}) {
      const double h = 1e-4;
      const double fd = (harmonic_measure_U(ctx, r + h) - harmonic_measure_U(ctx, r - h)) / (2 * h);
      CHECK(phi_derivative(ctx, r) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  // n = 3: U(rN) = (1 - (1 - r^2)/sqrt(1 + r^2)) / r
  const KernelContext c3(3);
  for (double r : {0.2, 0.5, 0.8, 0.95}) {
    CHECK(harmonic_measure_U(c3, r) == doctest::Approx((1 - (1 - r * r) / std::sqrt(1 + r * r)) / r).epsilon(1e-11));
  }
  CHECK(phi_derivative(c3, 0.0) == doctest::Approx(1.5).epsilon(1e-10));
  CHECK_THROWS_AS(harmonic_measure_U(c3, 1.0), DomainError);
}
