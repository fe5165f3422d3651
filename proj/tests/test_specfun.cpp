#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_pFq.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "polypotential/errors.hpp"
#include "polypotential/specfun.hpp"

using namespace polypotential;

namespace {

double boost_2f1(double a, double b, double c, double x) {
  return boost::math::hypergeometric_pFq({a, b}, {c}, x);
}

}  // namespace

TEST_CASE("gamma family") {
  CHECK(gamma_fn(3.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(beta_fn(0.5, 0.5) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
  CHECK_THROWS_AS(gamma_fn(-3.0), DomainError);
  CHECK_THROWS_AS(beta_fn(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(pochhammer(1.0, -1), DomainError);
  CHECK(pochhammer(2.5, 0) == 1.0);

  // Accuracy on [0.5, 30] against Boost.
  for (double x = 0.5; x <= 30.0; x += 0.37) {
    CHECK(gamma_fn(x) == doctest::Approx(boost::math::tgamma(x)).epsilon(1e-12));
  }
  // Half integers by exact recursion from Gamma(1/2).
  double g = std::sqrt(std::numbers::pi);
  for (int k = 0; k < 25; ++k) {
    CHECK(gamma_fn(0.5 + k) == doctest::Approx(g).epsilon(1e-13));
    g *= 0.5 + k;
  }
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 8.0);
  for (int i = 0; i < 50; ++i) {
    const double a = u(rng);
    const int k = i % 11;
    CHECK(pochhammer(a, k) == doctest::Approx(gamma_fn(a + k) / gamma_fn(a)).epsilon(1e-12));
    const double p = u(rng), q = u(rng);
    CHECK(beta_fn(p, q) == doctest::Approx(boost::math::beta(p, q)).epsilon(1e-12));
  }
  CHECK(log_gamma_fn(50.0) == doctest::Approx(boost::math::lgamma(50.0)).epsilon(1e-13));
}

TEST_CASE("hyp2f1 values") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.1, 4.0);
  for (int i = 0; i < 20; ++i) {
    CHECK(hyp2f1(u(rng), u(rng), u(rng), 0.0) == 1.0);
  }
  CHECK(hyp2f1(0.5, 1.0, 3.0, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));

  // F(1/2,1;3;-1) against Boost and against the Euler integral
  // (Gamma(c)/(Gamma(b)Gamma(c-b))) int_0^1 t^{b-1}(1-t)^{c-b-1}(1-xt)^{-a} dt.
  const double f = hyp2f1(0.5, 1.0, 3.0, -1.0);
  CHECK(f == doctest::Approx(boost_2f1(0.5, 1.0, 3.0, -1.0)).epsilon(1e-12));
  const double euler = 2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                 [](double t) { return (1 - t) / std::sqrt(1 + t); }, 0.0, 1.0);
  CHECK(f == doctest::Approx(euler).epsilon(1e-12));
  CHECK(f == doctest::Approx(0.8758).epsilon(1e-4));

  for (int i = 0; i < 40; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng) + 0.5;
    const double x = -0.99 + 1.89 * (i / 39.0);
    CHECK(hyp2f1(a, b, c, x) == doctest::Approx(boost_2f1(a, b, c, x)).epsilon(1e-10));
  }
}

TEST_CASE("hyp2f1 series approaches the Gauss value") {
  // c - a - b = 2.5: F(1 - e) = F(1) + O(e); Richardson over e, e/2, e/4.
  const double a = 0.5, b = 1.0, c = 4.0;
  const double exact = hyp2f1(a, b, c, 1.0);
  const double e = 1e-3;
  const double f1 = hyp2f1(a, b, c, 1 - e);
  const double f2 = hyp2f1(a, b, c, 1 - e / 2);
  const double f4 = hyp2f1(a, b, c, 1 - e / 4);
  const double r1 = 2 * f2 - f1;
  const double r2 = 2 * f4 - f2;
  const double extrapolated = (4 * r2 - r1) / 3;
  CHECK(std::abs(extrapolated - exact) < 1e-6);
}

TEST_CASE("hyp2f1 domain errors") {
  CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(hyp2f1(1.0, 1.0, -2.0, 0.5), DomainError);
  CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 3.0, 1.5), DomainError);
  CHECK_THROWS_AS(hyp2f1(1.0, 2.0, 3.0, 1.0), DomainError);
  CHECK_THROWS_AS(hyp2f1(1.0, 2.0, 2.5, 1.0), DomainError);
  // terminating series
  CHECK(hyp2f1(-2.0, 1.0, 1.0, 0.5) == doctest::Approx(0.25));
}

TEST_CASE("sphere singular integral") {
  CHECK(sphere_singular_integral(2.0, 1.5, 0.0) == doctest::Approx(beta_fn(1.0, 0.5)));
  // n = 3 Newtonian mean value: normalized mean of |p - zeta|^{-1} over S^2 is 1.
  for (double r : {0.0, 0.3, 0.9, 0.999}) {
    const double mean = sphere_singular_integral(2.0, 0.5, r) / beta_fn(1.0, 0.5);
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-12));
  }
  // lambda1 = n-1, lambda2 = (n+4)/2, n = 3, r = 0.5
  boost::math::quadrature::tanh_sinh<double> ts;
  auto direct = [&](double l1, double l2, double r) {
    return ts.integrate([&](double t) {
      const double s = std::sin(0.5 * t);
      return std::pow(std::sin(t), l1 - 1) * std::pow((1 - r) * (1 - r) + 4 * r * s * s, -l2);
    }, 0.0, std::numbers::pi);
  };
  CHECK(sphere_singular_integral(2.0, 3.5, 0.5) == doctest::Approx(direct(2.0, 3.5, 0.5)).epsilon(1e-8));

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ul1(1.2, 6.0), ul2(0.2, 4.0), ur(0.0, 0.9);
  for (int i = 0; i < 20; ++i) {
    const double l1 = ul1(rng), l2 = ul2(rng), r = ur(rng);
    CHECK(sphere_singular_integral(l1, l2, r) == doctest::Approx(direct(l1, l2, r)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(sphere_singular_integral(1.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(sphere_singular_integral(2.0, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(sphere_singular_integral(2.0, 1.0, 1.0), DomainError);
  CHECK_NOTHROW(sphere_singular_integral(3.0, 1.0, 1.0));
}

TEST_CASE("heinz constant") {
  // n = 3 with F(1/2,1;3;-1) from Boost.
  const double f = boost_2f1(0.5, 1.0, 3.0, -1.0);
  const double expected = 6.0 * (4.0 - f) / (std::pow(2.0, 4.5) * boost::math::tgamma(2.0) * boost::math::tgamma(3.0));
  CHECK(heinz_constant(3) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(heinz_constant(3) == doctest::Approx(0.4142).epsilon(1e-4));
  for (int n = 3; n <= 10; ++n) CHECK(heinz_constant(n) > 0.0);
  CHECK_THROWS_AS(heinz_constant(2), DomainError);
}
