#pragma once

// Gamma, Beta, Pochhammer, the Gauss hypergeometric function 2F1 on [-1,1],
// the sphere singular integral and the boundary Heinz constant.

namespace polypotential {

struct HypParams {
  double a = 0;
  double b = 0;
  double c = 1;
  double x = 0;
};

/// Largest number of series terms hyp2f1 will sum before giving up.
inline constexpr int kHypMaxTerms = 100000;
inline constexpr double kHypTolerance = 1e-15;

/// Lanczos approximation (g = 7, 9 terms) with reflection below 1/2.
/// Throws DomainError at non-positive integers.
double gamma_fn(double x);
/// log|Gamma(x)|.
double log_gamma_fn(double x);
/// 1/Gamma(x); zero at the poles.
double rgamma_fn(double x);
/// B(p,q) = Gamma(p)Gamma(q)/Gamma(p+q) for p,q > 0.
double beta_fn(double p, double q);
/// (a)_k = a(a+1)...(a+k-1), (a)_0 = 1.
double pochhammer(double a, int k);

/// F(a,b;c;x) for |x| <= 1. Plain series on (-1/2, 1), a Pfaff (Euler)
/// transformation on [-1, -1/2], and Gauss' closed form at x = 1.
double hyp2f1(const HypParams& p);
inline double hyp2f1(double a, double b, double c, double x) { return hyp2f1({a, b, c, x}); }

/// Partial sum of the defining power series with `terms` terms; no transformation.
double hyp2f1_partial_sum(const HypParams& p, int terms);

/// int_0^pi sin^{l1-1}t (1 + r^2 - 2 r cos t)^{-l2} dt in closed form,
/// B(l1/2, 1/2) F(l2, l2 + (1-l1)/2; (1+l1)/2; r^2).
double sphere_singular_integral(double lambda1, double lambda2, double r);

/// n! [1 + n - (n-2) F(1/2,1;(n+3)/2;-1)] / (2^{3n/2} Gamma((n+1)/2) Gamma((n+3)/2)).
double heinz_constant(int n);

}  // namespace polypotential
