#include "polypotential/green_integrate.hpp"

#include <algorithm>

namespace polypotential {

GreenBudget coarser(const GreenBudget& b) {
  return {std::max(2, (2 * b.sphere_level) / 3), std::max(4, (2 * b.radial) / 3)};
}

MobiusRule::MobiusRule(const Point& x, const GreenBudget& budget)
    : n_(static_cast<int>(x.size())), x_(x), s_(x.norm()) {
  if (n_ < 3) throw DomainError("MobiusRule: n must be >= 3");
  if (!x.allFinite()) throw DomainError("MobiusRule: non-finite point");
  if (!(s_ < 1.0)) throw DomainError("MobiusRule: |x| must be < 1");
  if (budget.sphere_level < 2 || budget.radial < 2) throw DomainError("MobiusRule: budget too small");

  Point axis = Point::Zero(n_);
  if (s_ > 0.0) {
    axis = x / s_;
  } else {
    axis(0) = 1.0;
  }
  frame_ = make_axis_frame(axis, std::max(1, (budget.sphere_level + 1) / 2));

  // r = 1 - delta sinh(u) on u in [0, asinh(1/delta)], delta ~ peak width in r.
  const double delta = s_ > 0.0 ? std::min((1.0 - s_) / s_, 1e6) : 1e6;
  const double umax = std::asinh(1.0 / delta);
  const GaussRule& g = gauss_legendre(budget.radial);
  radial_.reserve(budget.radial);
  for (int i = 0; i < budget.radial; ++i) {
    const double u = 0.5 * umax * (g.nodes[i] + 1.0);
    const double omr = delta * std::sinh(u);
    Radial rad;
    rad.one_minus_r = std::min(omr, 1.0);
    rad.r = 1.0 - rad.one_minus_r;
    rad.weight = 0.5 * umax * g.weights[i] * delta * std::cosh(u);
    rad.polar = polar_nodes(n_, budget.sphere_level, focus_width(rad.r * s_));
    radial_.push_back(std::move(rad));
  }
}

std::size_t MobiusRule::node_count() const {
  std::size_t c = 0;
  for (const auto& r : radial_) c += r.polar.theta.size() * static_cast<std::size_t>(frame_.equator.cols());
  return c;
}

}  // namespace polypotential
