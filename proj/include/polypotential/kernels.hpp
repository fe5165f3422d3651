#pragma once

// Green function and Poisson kernel of the unit ball, the gradient of G,
// closed-form potential identities, sphere moments and the harmonic-measure
// function U(rN) with its radial derivative Phi.

#include <Eigen/Dense>

#include "polypotential/geometry.hpp"

namespace polypotential {

struct KernelContext {
  int n = 3;
  double omega = 0.0;  ///< surface measure of S^{n-1}
  double c_n = 0.0;    ///< 1 / ((n-2) omega)

  explicit KernelContext(int dimension);
};

/// Tolerance on |zeta| = 1 for boundary arguments.
inline constexpr double kSphereTolerance = 1e-12;

double green(const KernelContext& ctx, const Point& x, const Point& y);
double poisson(const KernelContext& ctx, const Point& x, const Point& zeta);
Point grad_green(const KernelContext& ctx, const Point& x, const Point& y);

/// int_B |G(x,y)| dV(y) = (1 - |x|^2) / (2n).
double green_mass(const KernelContext& ctx, const Point& x);
/// int_B |G(x,y)| (1 - |y|^2) dV(y) = (n + 4 - n|x|^2)(1 - |x|^2) / (4n(n+2)).
double weighted_green_mass_I1(const KernelContext& ctx, const Point& x);

/// int_S dsigma(zeta) / |r x - zeta|^{n+4} = F((n+4)/2, 3; n/2; r^2|x|^2) when order4,
/// otherwise the n+3 moment F((n+3)/2, 5/2; n/2; r^2|x|^2).
double sphere_moment(const KernelContext& ctx, const Point& x, double r, bool order4 = true);
/// The n+4 moment as the terminating-coefficient series
/// sum_k (k+1)(k+2)(n+2k)(n+2k+2) / (2n(n+2)) s^{2k}, s = r|x|.
double sphere_moment_series(const KernelContext& ctx, double s);

/// U(rN) = P[chi_{S+} - chi_{S-}](rN) by polar reduction.
double harmonic_measure_U(const KernelContext& ctx, double r);
/// Phi(r) = dU(rN)/dr; Phi(1) is the closed-form boundary value.
double phi_derivative(const KernelContext& ctx, double r);

}  // namespace polypotential
