#pragma once

// Gauss-Legendre and adaptive Gauss-Kronrod rules, the spherical chart,
// product rules on the sphere and the ball, and polar rules focused on an
// axis for nearly singular kernels.

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "polypotential/geometry.hpp"

namespace polypotential {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached m-point Gauss-Legendre rule (Newton iteration on P_m).
const GaussRule& gauss_legendre(int m);

/// Fixed m-point Gauss-Legendre approximation of int_a^b f.
template <typename F>
double integrate_gauss(F&& f, double a, double b, int m) {
  const GaussRule& g = gauss_legendre(m);
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (b + a);
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += g.weights[i] * f(c + h * g.nodes[i]);
  return h * s;
}

struct AdaptiveOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// The returned error is the summed Kronrod-Gauss difference; it exceeds the
/// tolerance only when the interval budget ran out.
Estimate integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                            const AdaptiveOptions& opt = {});

/// Volume of the unit ball pi^{n/2} / Gamma(n/2 + 1).
double ball_volume(int n);
/// Surface measure omega_{n-1} = 2 pi^{n/2} / Gamma(n/2) of the unit sphere.
double sphere_area(int n);

/// x_1 = r cos t_1, x_k = r sin t_1 ... sin t_{k-1} cos t_k, x_n = r sin t_1 ... sin t_{n-1};
/// theta has n-1 entries, t_i in [0, pi] for i < n-1 and t_{n-1} in [0, 2 pi].
Point spherical_to_cartesian(double r, const Eigen::VectorXd& theta);

struct SphericalCoords {
  double r = 0.0;
  Eigen::VectorXd theta;
};

/// Inverse chart; angles are set to 0 where they are undetermined.
SphericalCoords cartesian_to_spherical(const Point& x);

/// det D_S = r^{n-1} sin^{n-2} t_1 ... sin t_{n-2}.
double spherical_jacobian(double r, const Eigen::VectorXd& theta);

/// Product rule on S^{n-1} for the normalized measure sigma. Nodes are the
/// columns of `nodes`; they are ordered row-major over the angle axes.
struct SphereRule {
  int n = 0;
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;
  std::vector<std::vector<double>> angles;  ///< angle nodes per chart axis

  Eigen::Index size() const { return weights.size(); }
};

/// Product rule on B^n for Lebesgue measure. Node index = radial index * directions + direction.
struct BallRule {
  int n = 0;
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;
  std::vector<double> radii;
  SphereRule directions;

  Eigen::Index size() const { return weights.size(); }
};

/// Upper bound on the node count of any product rule.
inline constexpr double kMaxRuleNodes = 5e7;

/// Gauss-Legendre in t_1..t_{n-2} (sin-power weights), 2*level trapezoid
/// nodes in t_{n-1}, normalized to mass 1. Also accepts n = 2 (circle).
SphereRule sphere_rule(int n, int level);

/// `radial` Gauss nodes in r with weight r^{n-1} times sphere_rule(n, level);
/// radial defaults to 2 * level.
BallRule ball_rule(int n, int level, int radial = 0);

/// Weighted sum sum_i w_i f(node_i).
template <typename Rule, typename F>
double integrate(const Rule& rule, F&& f) {
  double s = 0.0;
  double comp = 0.0;
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    const double term = rule.weights(i) * f(rule.nodes.col(i));
    const double t = s + term;
    comp += std::abs(s) >= std::abs(term) ? (s - t) + term : (term - t) + s;
    s = t;
  }
  return s + comp;
}

/// Orthonormal directions perpendicular to an axis, carrying an S^{n-2} rule
/// (weights sum to 1). A point of S^{n-1} at polar angle t from the axis is
/// cos(t) * axis + sin(t) * equator.col(j).
struct AxisFrame {
  Point axis;
  Eigen::MatrixXd equator;
  Eigen::VectorXd weights;
};

AxisFrame make_axis_frame(const Point& axis, int level);

/// Polar-angle nodes on [0, pi] for the measure sin^{n-2} t dt / B((n-1)/2, 1/2)
/// (total mass 1). [0, pi/2] uses theta = width * sinh(v) so that nodes cluster
/// near the axis at scale `width`; [pi/2, pi] uses plain Gauss-Legendre.
/// A positive `power` additionally grades toward t = 0 as t ~ u^power for
/// integrable algebraic endpoint singularities.
struct PolarNodes {
  std::vector<double> theta;
  std::vector<double> cos_theta;
  std::vector<double> sin_theta;
  std::vector<double> sin_half_sq;  ///< sin^2(theta/2), exact for small angles
  std::vector<double> weight;
};

PolarNodes polar_nodes(int n, int level, double width, double power = 0.0);

/// Concentration width of |rho e - zeta|^{-p} about e as a function of rho in [0,1).
double focus_width(double rho);

}  // namespace polypotential
