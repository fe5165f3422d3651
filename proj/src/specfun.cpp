#include "polypotential/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "polypotential/errors.hpp"

namespace polypotential {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(double x) { return x <= 0 && std::floor(x) == x; }

double lanczos_series(double z) {
  double s = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) s += kLanczosCoeffs[i] / (z + double(i));
  return s;
}

}  // namespace

double gamma_fn(double x) {
  if (!std::isfinite(x)) throw DomainError("gamma_fn: non-finite argument");
  if (is_nonpositive_integer(x)) throw DomainError("gamma_fn: pole at " + std::to_string(x));
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * lanczos_series(z);
}

double log_gamma_fn(double x) {
  if (is_nonpositive_integer(x)) throw DomainError("log_gamma_fn: pole");
  if (x < 0.5) {
    return std::log(std::numbers::pi / std::abs(std::sin(std::numbers::pi * x))) -
           log_gamma_fn(1.0 - x);
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(lanczos_series(z));
}

double rgamma_fn(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / gamma_fn(x);
}

double beta_fn(double p, double q) {
  if (!(p > 0) || !(q > 0)) throw DomainError("beta_fn: arguments must be positive");
  if (p + q < 150.0) return gamma_fn(p) * gamma_fn(q) / gamma_fn(p + q);
  return std::exp(log_gamma_fn(p) + log_gamma_fn(q) - log_gamma_fn(p + q));
}

double pochhammer(double a, int k) {
  if (k < 0) throw DomainError("pochhammer: k must be >= 0");
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= a + i;
  return p;
}

double hyp2f1_partial_sum(const HypParams& p, int terms) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 0; k < terms; ++k) {
    sum += term;
    term *= (p.a + k) * (p.b + k) / ((p.c + k) * (k + 1.0)) * p.x;
  }
  return sum;
}

namespace {

double hyp2f1_series(double a, double b, double c, double x) {
  double sum = 1.0;
  double term = 1.0;
  int small_run = 0;
  for (int k = 0; k < kHypMaxTerms; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
    sum += term;
    if (term == 0.0) return sum;
    // Require a few consecutive negligible terms; the ratio can dip before
    // the tail settles into geometric decay.
    if (std::abs(term) <= kHypTolerance * std::abs(sum)) {
      if (++small_run >= 3) return sum;
    } else {
      small_run = 0;
    }
  }
  throw BudgetExhausted("hyp2f1: series did not converge within " +
                        std::to_string(kHypMaxTerms) + " terms");
}

}  // namespace

double hyp2f1(const HypParams& p) {
  const auto [a, b, c, x] = p;
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(x)) {
    throw DomainError("hyp2f1: non-finite parameter");
  }
  if (is_nonpositive_integer(c)) throw DomainError("hyp2f1: c is a non-positive integer");
  if (std::abs(x) > 1.0) throw DomainError("hyp2f1: |x| > 1 is outside the supported region");
  if (x == 0.0) return 1.0;

  // Terminating series are polynomials and valid everywhere.
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    const int terms = static_cast<int>(-std::max(is_nonpositive_integer(a) ? a : -1e300,
                                                 is_nonpositive_integer(b) ? b : -1e300)) + 1;
    return hyp2f1_partial_sum(p, terms);
  }

  if (x == 1.0) {
    const double s = c - a - b;
    if (!(s > 0)) throw DomainError("hyp2f1: divergent at x = 1 (c - a - b <= 0)");
    return gamma_fn(c) * gamma_fn(s) * rgamma_fn(c - a) * rgamma_fn(c - b);
  }

  if (x <= -0.5) {
    // Pfaff: F(a,b;c;x) = (1-x)^{-a} F(a, c-b; c; x/(x-1)), argument in [1/3, 1/2].
    const double w = x / (x - 1.0);
    if (is_nonpositive_integer(c - b)) {
      return std::pow(1.0 - x, -a) * hyp2f1_partial_sum({a, c - b, c, w},
                                                        static_cast<int>(-(c - b)) + 1);
    }
    return std::pow(1.0 - x, -a) * hyp2f1_series(a, c - b, c, w);
  }
  return hyp2f1_series(a, b, c, x);
}

double sphere_singular_integral(double lambda1, double lambda2, double r) {
  if (!(lambda1 > 1.0)) throw DomainError("sphere_singular_integral: lambda1 must be > 1");
  if (!(lambda2 > 0.0)) throw DomainError("sphere_singular_integral: lambda2 must be > 0");
  if (!(r >= 0.0) || r > 1.0) throw DomainError("sphere_singular_integral: r must lie in [0,1]");
  if (r == 1.0 && !(lambda1 - 2.0 * lambda2 > 0.0)) {
    throw DomainError("sphere_singular_integral: r = 1 requires lambda1 - 2 lambda2 > 0");
  }
  const double f = hyp2f1(lambda2, lambda2 + 0.5 * (1.0 - lambda1), 0.5 * (1.0 + lambda1), r * r);
  return beta_fn(0.5 * lambda1, 0.5) * f;
}

double heinz_constant(int n) {
  if (n < 3) throw DomainError("heinz_constant: n must be >= 3");
  const double nn = n;
  const double f = hyp2f1(0.5, 1.0, 0.5 * (nn + 3.0), -1.0);
  const double numer = gamma_fn(nn + 1.0) * (1.0 + nn - (nn - 2.0) * f);
  const double denom =
      std::pow(2.0, 1.5 * nn) * gamma_fn(0.5 * (nn + 1.0)) * gamma_fn(0.5 * (nn + 3.0));
  return numer / denom;
}

}  // namespace polypotential
