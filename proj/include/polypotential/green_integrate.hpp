#pragma once

// Integration of Green potentials over the ball in Mobius coordinates.
//
// With y = phi_x(z), z = r zeta, the Green kernel times the Jacobian of phi_x is
//   G(x, y) dV(y) = (1 - |x|^2)^2 (r - r^{n-1}) / ((n-2) |r x - zeta|^{n+2}) dr dsigma(zeta),
// which is bounded, so the pole at y = x disappears. What remains is a peak of
// width ~ (1 - |x|) at r = 1, zeta = x/|x|; it is resolved with a sinh-graded
// radial map and sinh-graded polar angles about the axis x/|x|.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "polypotential/errors.hpp"
#include "polypotential/geometry.hpp"
#include "polypotential/quadrature.hpp"

namespace polypotential {

struct GreenBudget {
  int sphere_level = 24;  ///< polar nodes per half-range; the equatorial rule uses half of it
  int radial = 48;
};

/// The (2/3)-scaled budget used for the two-level error estimate.
GreenBudget coarser(const GreenBudget& b);

/// One quadrature node of the Mobius rule centred at x.
struct MobiusNode {
  const Point& y;       ///< phi_x(z)
  double one_minus_y2;  ///< 1 - |y|^2 without cancellation
  double r;             ///< |z|
  double green_weight;  ///< G(x, y) dV(y) for this node
  double volume_weight; ///< dV(y) for this node
};

class MobiusRule {
 public:
  MobiusRule(const Point& x, const GreenBudget& budget);

  int dimension() const { return n_; }
  const Point& centre() const { return x_; }
  std::size_t node_count() const;

  template <typename Visit>
  void visit(Visit&& visit) const;

 private:
  struct Radial {
    double r;
    double one_minus_r;
    double weight;
    PolarNodes polar;
  };

  int n_;
  Point x_;
  double s_;
  AxisFrame frame_;
  std::vector<Radial> radial_;
};

template <typename Visit>
void MobiusRule::visit(Visit&& visit) const {
  const int n = n_;
  const double s2 = s_ * s_;
  const double q = 1.0 - s2;
  const double area = sphere_area(n);
  Point zeta(n);
  Point y(n);
  for (const Radial& rad : radial_) {
    const double r = rad.r;
    const double rho = r * s_;
    // r - r^{n-1} = r (1 - r)(1 + r + ... + r^{n-3})
    double geo = 0.0;
    double pw = 1.0;
    for (int i = 0; i < n - 2; ++i) {
      geo += pw;
      pw *= r;
    }
    const double radial_factor = r * rad.one_minus_r * geo / (n - 2);
    const double rn1 = std::pow(r, n - 1);
    const double one_minus_r2 = rad.one_minus_r * (1.0 + r);
    const PolarNodes& p = rad.polar;
    for (std::size_t a = 0; a < p.theta.size(); ++a) {
      const double c = p.cos_theta[a];
      const double sn = p.sin_theta[a];
      // [x, z]^2 = |r x - zeta|^2 = (1 - rho)^2 + 4 rho sin^2(t/2)
      const double d = (1.0 - rho) * (1.0 - rho) + 4.0 * rho * p.sin_half_sq[a];
      const double base = rad.weight * p.weight[a];
      const double gw = base * q * q * radial_factor / std::pow(d, 0.5 * (n + 2));
      const double vw = base * area * rn1 * std::pow(q / d, n);
      const double one_minus_y2 = q * one_minus_r2 / d;
      const double xz2 = s2 - 2.0 * rho * c + r * r;  // |x - z|^2
      for (Eigen::Index j = 0; j < frame_.equator.cols(); ++j) {
        zeta.noalias() = c * frame_.axis + sn * frame_.equator.col(j);
        if (s_ == 0.0) {
          y.noalias() = r * zeta;
        } else {
          y.noalias() = ((xz2 + q) / d) * x_ - (q * r / d) * zeta;
        }
        const double wj = frame_.weights(j);
        visit(MobiusNode{y, one_minus_y2, r, gw * wj, vw * wj});
      }
    }
  }
}

namespace detail {

inline void check_finite(double v) {
  if (!std::isfinite(v)) throw DomainError("green_integrate: integrand produced a non-finite value");
}

template <typename F>
double green_sum(const MobiusRule& rule, F& f) {
  double s = 0.0;
  double comp = 0.0;
  rule.visit([&](const MobiusNode& node) {
    const double fv = f(node.y);
    check_finite(fv);
    const double term = node.green_weight * fv;
    const double t = s + term;
    comp += std::abs(s) >= std::abs(term) ? (s - t) + term : (term - t) + s;
    s = t;
  });
  return s + comp;
}

inline void check_budget(const Estimate& e, double rel_tol) {
  if (std::isfinite(rel_tol) && e.error > rel_tol * std::max(std::abs(e.value), 1e-300)) {
    throw BudgetExhausted("green_integrate: error estimate " + std::to_string(e.error) +
                          " exceeds tolerance at the given budget");
  }
}

}  // namespace detail

/// int_B G(x, y) f(y) dV(y) with error = |value - value at the coarser budget|.
/// Throws BudgetExhausted when error > rel_tol * |value|.
template <typename F>
Estimate green_integrate(const Point& x, F&& f, const GreenBudget& budget = {},
                         double rel_tol = std::numeric_limits<double>::infinity()) {
  const MobiusRule fine(x, budget);
  const MobiusRule coarse(x, coarser(budget));
  Estimate e;
  e.value = detail::green_sum(fine, f);
  e.error = std::abs(e.value - detail::green_sum(coarse, f));
  detail::check_budget(e, rel_tol);
  return e;
}

/// Single-level evaluation; f(y, out) writes a vector of length `dim`.
template <typename F>
Eigen::VectorXd green_integrate_vector_once(const MobiusRule& rule, int dim, F&& f) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd buf(dim);
  rule.visit([&](const MobiusNode& node) {
    f(node.y, buf);
    acc.noalias() += node.green_weight * buf;
  });
  if (!acc.allFinite()) throw DomainError("green_integrate: integrand produced a non-finite value");
  return acc;
}

struct VectorEstimate {
  Eigen::VectorXd value;
  double error = 0.0;  ///< max-norm difference between the two budgets
};

template <typename F>
VectorEstimate green_integrate_vector(const Point& x, int dim, F&& f, const GreenBudget& budget = {}) {
  VectorEstimate e;
  e.value = green_integrate_vector_once(MobiusRule(x, budget), dim, f);
  const Eigen::VectorXd c = green_integrate_vector_once(MobiusRule(x, coarser(budget)), dim, f);
  e.error = (e.value - c).cwiseAbs().maxCoeff();
  return e;
}

/// int_B g(node) dV(y) for a general integrand that sees the whole node
/// (Mobius coordinates regularize |x - y|^{1-n}-type singularities as well).
template <typename G>
Estimate mobius_integrate(const Point& x, G&& g, const GreenBudget& budget = {}) {
  auto sum = [&](const MobiusRule& rule) {
    double s = 0.0;
    rule.visit([&](const MobiusNode& node) { s += node.volume_weight * g(node); });
    if (!std::isfinite(s)) throw DomainError("mobius_integrate: non-finite integrand");
    return s;
  };
  Estimate e;
  e.value = sum(MobiusRule(x, budget));
  e.error = std::abs(e.value - sum(MobiusRule(x, coarser(budget))));
  return e;
}

/// Monte Carlo estimate of int_B G(x, y) f(y) dV(y): r uniform on [0, 1],
/// zeta uniform on the sphere, with the exactly known Green mass as a control
/// variate. The error is one standard error.
template <typename F>
Estimate green_integrate_mc(const Point& x, F&& f, std::size_t samples, std::uint64_t seed) {
  const int n = static_cast<int>(x.size());
  if (n < 3) throw DomainError("green_integrate_mc: n must be >= 3");
  const double s2 = x.squaredNorm();
  if (!(s2 < 1.0)) throw DomainError("green_integrate_mc: |x| must be < 1");
  if (samples < 2) throw DomainError("green_integrate_mc: need at least two samples");
  const double q = 1.0 - s2;
  const double mass = q / (2.0 * n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Point zeta(n);
  Point z(n);
  double sh = 0, sg = 0, shh = 0, sgg = 0, shg = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = unif(rng);
    for (int k = 0; k < n; ++k) zeta(k) = gauss(rng);
    zeta.normalize();
    z = r * zeta;
    const double d = bracket_squared(x, z);
    const double kernel = q * q * (r - std::pow(r, n - 1)) / ((n - 2) * std::pow(d, 0.5 * (n + 2)));
    const Point y = s2 == 0.0 ? Point(z) : mobius(x, z);
    const double h = kernel * f(y);
    detail::check_finite(h);
    sh += h;
    sg += kernel;
    shh += h * h;
    sgg += kernel * kernel;
    shg += h * kernel;
  }
  const double m = static_cast<double>(samples);
  const double mh = sh / m;
  const double mg = sg / m;
  const double vh = shh / m - mh * mh;
  const double vg = sgg / m - mg * mg;
  const double chg = shg / m - mh * mg;
  const double beta = vg > 0.0 ? chg / vg : 0.0;
  const double resid_var = std::max(vh - beta * chg, 0.0);
  return {mh - beta * (mg - mass), std::sqrt(resid_var / (m - 1.0))};
}

}  // namespace polypotential
