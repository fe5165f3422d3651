#include "polypotential/kernels.hpp"

#include <cmath>
#include <numbers>

#include "polypotential/errors.hpp"
#include "polypotential/quadrature.hpp"
#include "polypotential/specfun.hpp"

namespace polypotential {
namespace {

void require_interior(const Point& x, const char* who) {
  if (!x.allFinite()) throw DomainError(std::string(who) + ": non-finite point");
  if (!(x.squaredNorm() < 1.0)) throw DomainError(std::string(who) + ": point outside the open ball");
}

void require_ctx_dimension(const KernelContext& ctx, const Point& x) {
  if (x.size() != ctx.n) throw DimensionError("kernel context dimension does not match point");
}

// (1 + r^2 - 2 r cos t) written as (1 - r)^2 + 4 r sin^2(t/2).
double polar_distance_sq(double r, double t) {
  const double s = std::sin(0.5 * t);
  return (1.0 - r) * (1.0 - r) + 4.0 * r * s * s;
}

Estimate polar_integral(const std::function<double(double)>& f, double r) {
  // Split at the equator and again near the pole where the kernel peaks.
  AdaptiveOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-15;
  opt.max_intervals = 20000;
  const double half = 0.5 * std::numbers::pi;
  const double w = std::min(half, 8.0 * (1.0 - r) + 1e-300);
  Estimate a = integrate_adaptive(f, 0.0, w, opt);
  Estimate b = w < half ? integrate_adaptive(f, w, half, opt) : Estimate{};
  Estimate c = integrate_adaptive(f, half, std::numbers::pi, opt);
  return {a.value + b.value + c.value, a.error + b.error + c.error};
}

}  // namespace

KernelContext::KernelContext(int dimension) : n(dimension) {
  if (n < 3) throw DomainError("KernelContext: n must be >= 3");
  omega = sphere_area(n);
  c_n = 1.0 / ((n - 2) * omega);
}

double green(const KernelContext& ctx, const Point& x, const Point& y) {
  require_ctx_dimension(ctx, x);
  detail::require_same_dimension(x, y);
  require_interior(x, "green");
  require_interior(y, "green");
  const double d = (x - y).norm();
  if (!(d > 0.0)) throw DomainError("green: pole at x = y");
  const double b = bracket(x, y);
  return ctx.c_n * (std::pow(d, 2 - ctx.n) - std::pow(b, 2 - ctx.n));
}

double poisson(const KernelContext& ctx, const Point& x, const Point& zeta) {
  require_ctx_dimension(ctx, x);
  detail::require_same_dimension(x, zeta);
  require_interior(x, "poisson");
  if (std::abs(zeta.norm() - 1.0) > kSphereTolerance) throw DomainError("poisson: |zeta| must be 1");
  return (1.0 - x.squaredNorm()) / std::pow((x - zeta).norm(), ctx.n);
}

Point grad_green(const KernelContext& ctx, const Point& x, const Point& y) {
  require_ctx_dimension(ctx, x);
  detail::require_same_dimension(x, y);
  require_interior(x, "grad_green");
  require_interior(y, "grad_green");
  const double d = (x - y).norm();
  if (!(d > 0.0)) throw DomainError("grad_green: pole at x = y");
  const double b = bracket(x, y);
  const Point reflected = y.squaredNorm() * x - y;
  return -(1.0 / ctx.omega) * ((x - y) / std::pow(d, ctx.n) - reflected / std::pow(b, ctx.n));
}

double green_mass(const KernelContext& ctx, const Point& x) {
  require_ctx_dimension(ctx, x);
  require_interior(x, "green_mass");
  return (1.0 - x.squaredNorm()) / (2.0 * ctx.n);
}

double weighted_green_mass_I1(const KernelContext& ctx, const Point& x) {
  require_ctx_dimension(ctx, x);
  require_interior(x, "weighted_green_mass_I1");
  const double t = x.squaredNorm();
  const double n = ctx.n;
  return (n + 4.0 - n * t) * (1.0 - t) / (4.0 * n * (n + 2.0));
}

double sphere_moment(const KernelContext& ctx, const Point& x, double r, bool order4) {
  require_ctx_dimension(ctx, x);
  const double s = r * x.norm();
  if (!(s < 1.0) || r < 0.0) throw DomainError("sphere_moment: r|x| must lie in [0,1)");
  const double n = ctx.n;
  // Polar integral formula with lambda1 = n - 1 and 2 lambda2 = n + 4 (or n + 3), normalized by B((n-1)/2, 1/2).
  const double l2 = order4 ? 0.5 * (n + 4.0) : 0.5 * (n + 3.0);
  return hyp2f1(l2, l2 + 0.5 * (2.0 - n), 0.5 * n, s * s);
}

double sphere_moment_series(const KernelContext& ctx, double s) {
  if (!(s >= 0.0 && s < 1.0)) throw DomainError("sphere_moment_series: s must lie in [0,1)");
  const double n = ctx.n;
  const double s2 = s * s;
  double sum = 0.0;
  double pw = 1.0;
  for (int k = 0; k < 200000; ++k) {
    const double term = (k + 1.0) * (k + 2.0) * (n + 2.0 * k) * (n + 2.0 * k + 2.0) /
                        (2.0 * n * (n + 2.0)) * pw;
    sum += term;
    if (term < 1e-18 * sum) return sum;
    pw *= s2;
  }
  throw BudgetExhausted("sphere_moment_series: series did not converge");
}

double harmonic_measure_U(const KernelContext& ctx, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("harmonic_measure_U: r must lie in [0,1)");
  if (r == 0.0) return 0.0;
  const int n = ctx.n;
  const double norm = 1.0 / beta_fn(0.5 * (n - 1), 0.5);
  const double q = 1.0 - r * r;
  const double half = 0.5 * std::numbers::pi;
  // t is the angle from N; the upper hemisphere is t < pi/2.
  auto f = [&](double t) {
    const double sign = t < half ? 1.0 : -1.0;
    return sign * q * std::pow(std::sin(t), n - 2) / std::pow(polar_distance_sq(r, t), 0.5 * n);
  };
  return norm * polar_integral(f, r).value;
}

double phi_derivative(const KernelContext& ctx, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("phi_derivative: r must lie in [0,1]");
  if (r == 1.0) return heinz_constant(ctx.n);
  const int n = ctx.n;
  const double norm = 1.0 / beta_fn(0.5 * (n - 1), 0.5);
  const double half = 0.5 * std::numbers::pi;
  auto f = [&](double t) {
    const double sign = t < half ? 1.0 : -1.0;
    const double d = polar_distance_sq(r, t);
    const double c = std::cos(t);
    // d/dr [(1 - r^2) d^{-n/2}] with dd/dr = 2(r - cos t)
    const double deriv = -2.0 * r * std::pow(d, -0.5 * n) -
                         0.5 * n * (1.0 - r * r) * 2.0 * (r - c) * std::pow(d, -0.5 * n - 1.0);
    return sign * std::pow(std::sin(t), n - 2) * deriv;
  };
  return norm * polar_integral(f, r).value;
}

}  // namespace polypotential
