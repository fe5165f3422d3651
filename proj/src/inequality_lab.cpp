#include "polypotential/inequality_lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "polypotential/errors.hpp"
#include "polypotential/kernels.hpp"
#include "polypotential/parallel.hpp"
#include "polypotential/specfun.hpp"

namespace polypotential {

namespace {

constexpr double kCheckTolerance = 1e-12;

bool on_sphere(const Point& x) { return std::abs(x.norm() - 1.0) <= kSphereTolerance; }

std::vector<double> to_vector(const Point& x) { return {x.data(), x.data() + x.size()}; }

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Spherical chart without range checks, for finite differences.
Point chart(const Eigen::VectorXd& theta) {
  const auto n = theta.size() + 1;
  Point x(n);
  double prod = 1.0;
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    x(i) = prod * std::cos(theta(i));
    prod *= std::sin(theta(i));
  }
  x(n - 1) = prod;
  return x;
}

}  // namespace

std::size_t BoundsReport::violations() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return !e.pass; }));
}

BoundsEntry& BoundsReport::add(BoundsEntry e) {
  const double slack = e.error_bar + e.tolerance;
  double excess = 0.0;
  if (e.relation == "<=") {
    excess = e.value - e.bound - slack;
  } else if (e.relation == ">=") {
    excess = e.bound - e.value - slack;
  } else if (e.relation == "==") {
    excess = std::abs(e.value - e.bound) - slack;
  } else {
    throw DomainError("BoundsReport: unknown relation '" + e.relation + "'");
  }
  // NaN counts as a violation.
  e.pass = excess <= 0.0;
  e.violation = e.pass ? 0.0 : (std::isnan(excess) ? std::numeric_limits<double>::infinity() : excess);
  entries.push_back(std::move(e));
  return entries.back();
}

double c0_argmax() { return (-1.0 + std::sqrt(7.0)) / 3.0; }

double c0() {
  const double t = c0_argmax();
  return (2.0 - t * t) * (1.0 + t);
}

double c0_grid_search(int points) {
  if (points < 2) throw DomainError("c0_grid_search: need at least two points");
  double best = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / points;
    best = std::max(best, (2.0 - t * t) * (1.0 + t));
  }
  return best;
}

double delta_n(int n) {
  if (n < 3) throw DomainError("delta_n: n must be >= 3");
  const double nn = n;
  return (nn * nn - 4.0) / (3.0 * (nn * nn - 1.0)) * c0() + 4.0 / (nn * (nn + 1.0));
}

BoundsReport schwarz_bound_check(const Solver& solver, const Evaluator& f, const std::vector<Point>& samples) {
  const ProblemSpec& spec = solver.spec();
  const int n = spec.n;
  const KernelContext ctx(n);
  BoundsReport report;
  report.name = "schwarz";
  report.notes.push_back("||P[phi_0]|| is sup |phi_0| on the sphere (exact for the presets)");

  const Point origin = Point::Zero(n);
  const VectorEstimate p0 = solver.poisson_extend(spec.phi[0], origin);
  const double p_norm = spec.phi[0].sup_norm(n, false);

  std::vector<BoundsEntry> rows(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const Point& x = samples[i];
    if (x.size() != n) throw DimensionError("schwarz_bound_check: sample has the wrong dimension");
    const double s = x.norm();
    if (s > 1.0 + kSphereTolerance) throw DomainError("schwarz_bound_check: sample outside the closed ball");
    const VectorEstimate fx = f(x);
    const double c = (1.0 - s * s) * std::pow(1.0 + s * s, -0.5 * n);
    BoundsEntry e;
    e.label = "schwarz";
    e.point = to_vector(x);
    e.value = (fx.value - c * p0.value).norm();
    const double u = s >= 1.0 - kSphereTolerance ? 1.0 : harmonic_measure_U(ctx, s);
    e.bound = p_norm * u;
    for (int k = 1; k <= spec.m; ++k) e.bound += solver.chain_bound(k, x);
    e.error_bar = fx.error + c * p0.error;
    e.tolerance = kCheckTolerance;
    rows[i] = std::move(e);
  });
  for (auto& e : rows) report.add(std::move(e));
  return report;
}

double heinz_rhs(const Solver& solver) {
  const int n = solver.dimension();
  const double rho = green_iteration_ratio(n);
  double rhs = heinz_constant(n);
  for (int k = 1; k <= solver.spec().m; ++k) {
    rhs -= solver.datum_norm(k) / n * std::pow(rho, k - 1) * (1.0 + std::pow(2.0, -0.5 * n));
  }
  return rhs;
}

BoundsReport heinz_liminf_check(const Solver& solver, const Evaluator& f, const Point& zeta,
                                const std::vector<double>& radii) {
  const int n = solver.dimension();
  if (zeta.size() != n) throw DimensionError("heinz_liminf_check: zeta has the wrong dimension");
  if (!on_sphere(zeta)) throw DomainError("heinz_liminf_check: zeta must lie on the unit sphere");
  const VectorEstimate f0 = f(Point::Zero(n));
  if (f0.value.norm() > 1e-2) throw InapplicableHypothesis("heinz_liminf_check: f(0) != 0");
  const VectorEstimate fz = f(zeta);
  if (std::abs(fz.value.norm() - 1.0) > 1e-2) {
    throw InapplicableHypothesis("heinz_liminf_check: |f(zeta)| is not within 1e-2 of 1");
  }
  BoundsReport report;
  report.name = "heinz";
  const double rhs = heinz_rhs(solver);
  for (double r : radii) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("heinz_liminf_check: radii must lie in (0,1)");
    const VectorEstimate fr = f(r * zeta);
    BoundsEntry e;
    e.label = "heinz_quotient";
    e.point = to_vector(r * zeta);
    e.value = (fz.value - fr.value).norm() / (1.0 - r);
    e.bound = rhs;
    e.relation = ">=";
    e.error_bar = (fz.error + fr.error) / (1.0 - r);
    e.tolerance = kCheckTolerance;
    report.add(std::move(e));
  }
  return report;
}

BoundsReport gradient_bound_check(const Solver& solver, int k, const std::vector<Point>& samples,
                                  const GradientOptions& opt) {
  const ProblemSpec& spec = solver.spec();
  const int n = spec.n;
  if (k < 1 || k > spec.m) throw DomainError("gradient_bound_check: k out of range");
  if (!(opt.step >= 1e-7) || !(opt.boundary_step >= 1e-7)) {
    throw DomainError("gradient_bound_check: step-size underflow");
  }
  const double rho = green_iteration_ratio(n);
  const double norm = solver.datum_norm(k);
  const double interior = k == 1 ? n * norm / (n + 1.0) : norm / (2.0 * n) * std::pow(rho, k - 2) * delta_n(n);
  // (1/2n) int (1-|y|^2)^2 |e - y|^{-n} dV / omega = 1/(n^2(n+2)); equality for constant phi_k.
  const double boundary = k == 1 ? norm / n : norm / (n * n * (n + 2.0)) * std::pow(rho, k - 2);
  const GreenBudget fine = opt.budget;
  const GreenBudget coarse = coarser(opt.budget);

  BoundsReport report;
  report.name = "gradient_k" + std::to_string(k);
  std::vector<BoundsEntry> rows(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const Point& x = samples[i];
    if (x.size() != n) throw DimensionError("gradient_bound_check: sample has the wrong dimension");
    const double s = x.norm();
    BoundsEntry e;
    e.point = to_vector(x);
    e.tolerance = kCheckTolerance;
    if (on_sphere(x)) {
      // G_k vanishes on the sphere, so D = (d_nu G_k) nu^T there.
      const Point nu = x / s;
      auto radial = [&](double h, const GreenBudget& b) {
        return Eigen::VectorXd((-4.0 * solver.green_chain(k, (1.0 - h) * nu, b).value +
                                solver.green_chain(k, (1.0 - 2.0 * h) * nu, b).value) /
                               (2.0 * h));
      };
      const double h = opt.boundary_step;
      const Eigen::VectorXd d1 = radial(h, fine);
      const Eigen::VectorXd d2 = radial(0.5 * h, fine);
      const Eigen::VectorXd d = (4.0 * d2 - d1) / 3.0;
      const Eigen::VectorXd dc = radial(0.5 * h, coarse);
      e.label = "boundary";
      e.value = d.norm();
      e.bound = boundary;
      e.error_bar = (d2 - d1).norm() / 3.0 + (d2 - dc).norm();
    } else {
      if (s >= 1.0) throw DomainError("gradient_bound_check: sample outside the closed ball");
      const double h = std::min(opt.step, 0.25 * (1.0 - s));
      auto jacobian = [&](double step, const GreenBudget& b) {
        Eigen::MatrixXd d(spec.target_dim, n);
        Point p = x;
        for (int c = 0; c < n; ++c) {
          p(c) = x(c) + step;
          const Eigen::VectorXd plus = solver.green_chain(k, p, b).value;
          p(c) = x(c) - step;
          d.col(c) = (plus - solver.green_chain(k, p, b).value) / (2.0 * step);
          p(c) = x(c);
        }
        return d;
      };
      const Eigen::MatrixXd d1 = jacobian(h, fine);
      const Eigen::MatrixXd d2 = jacobian(0.5 * h, fine);
      const Eigen::MatrixXd d = (4.0 * d2 - d1) / 3.0;
      const Eigen::MatrixXd dc = jacobian(h, coarse);
      e.label = "interior";
      e.value = max_abs(d) == 0.0 ? 0.0 : operator_norm(d);
      e.bound = interior;
      e.error_bar = (max_abs(d2 - d1) == 0.0 ? 0.0 : operator_norm(Eigen::MatrixXd(d2 - d1)) / 3.0) +
                    (max_abs(d1 - dc) == 0.0 ? 0.0 : operator_norm(Eigen::MatrixXd(d1 - dc)));
    }
    rows[i] = std::move(e);
  });
  for (auto& e : rows) report.add(std::move(e));
  return report;
}

Estimate I2_integral(const Point& x, const GreenBudget& budget) {
  const KernelContext ctx(static_cast<int>(x.size()));
  return mobius_integrate(
      x, [&](const MobiusNode& node) { return grad_green(ctx, x, node.y).norm() * node.one_minus_y2; }, budget);
}

Estimate I3_integral(const Point& x) {
  const int n = static_cast<int>(x.size());
  const KernelContext ctx(n);
  const double q = 1.0 - x.squaredNorm();
  if (!(q > 0.0)) throw DomainError("I3_integral: |x| must be < 1");
  Estimate e = integrate_adaptive(
      [&](double r) { return (1.0 - r * r) * (1.0 - std::pow(r, n - 2)) * sphere_moment(ctx, x, r, false); }, 0.0, 1.0);
  e.value *= q * q;
  e.error *= q * q;
  return e;
}

Estimate I4_integral(const Point& x) {
  const int n = static_cast<int>(x.size());
  const KernelContext ctx(n);
  const double q = 1.0 - x.squaredNorm();
  if (!(q > 0.0)) throw DomainError("I4_integral: |x| must be < 1");
  Estimate e = integrate_adaptive(
      [&](double r) {
        const double w = 1.0 - r * r;
        return w * w * std::pow(r, n - 2) * sphere_moment(ctx, x, r, true);
      },
      0.0, 1.0);
  e.value *= q * q;
  e.error *= q * q;
  return e;
}

BoundsReport I2_bound_check(int n, const std::vector<Point>& samples, const GreenBudget& budget) {
  if (n < 3 || n > 5) throw DomainError("I2_bound_check: n must lie in {3, 4, 5}");
  const double delta = delta_n(n);
  BoundsReport report;
  report.name = "I2";
  std::vector<std::array<BoundsEntry, 2>> rows(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const Point& x = samples[i];
    if (x.size() != n) throw DimensionError("I2_bound_check: sample has the wrong dimension");
    const Estimate i2 = I2_integral(x, budget);
    const Estimate i3 = I3_integral(x);
    const Estimate i4 = I4_integral(x);
    BoundsEntry a;
    a.label = "I2<=delta";
    a.point = to_vector(x);
    a.value = i2.value;
    a.bound = delta;
    a.error_bar = i2.error;
    a.tolerance = kCheckTolerance;
    BoundsEntry b = a;
    b.label = "I2<=I3+I4";
    b.bound = i3.value + i4.value;
    b.error_bar = i2.error + i3.error + i4.error;
    rows[i] = {std::move(a), std::move(b)};
  });
  for (auto& r : rows) {
    report.add(std::move(r[0]));
    report.add(std::move(r[1]));
  }
  return report;
}

Estimate lambda_integral(const Datum& phi0, const Point& t, int level) {
  const int n = static_cast<int>(t.size());
  if (n < 3) throw DimensionError("lambda_integral: n must be >= 3");
  if (!on_sphere(t)) throw DomainError("lambda_integral: t must lie on the unit sphere");
  if (!phi0.lipschitz_constant(n)) {
    throw InapplicableHypothesis("lambda_integral: preset '" + phi0.name() + "' is not Lipschitz on the sphere");
  }
  if (level < 3) throw DomainError("lambda_integral: level must be >= 3");
  if (phi0.is_zero()) return {};
  const Eigen::VectorXd ft = phi0(t);
  Eigen::VectorXd buf(ft.size());
  auto once = [&](int lv) {
    const AxisFrame frame = make_axis_frame(t, std::max(1, (lv + 1) / 2));
    const PolarNodes polar = polar_nodes(n, lv, 1.0);
    Point eta(n);
    double sum = 0.0;
    for (std::size_t a = 0; a < polar.theta.size(); ++a) {
      const double dist2 = 4.0 * polar.sin_half_sq[a];
      const double w = polar.weight[a] / std::pow(dist2, 0.5 * n);
      for (Eigen::Index j = 0; j < frame.equator.cols(); ++j) {
        eta.noalias() = polar.cos_theta[a] * frame.axis + polar.sin_theta[a] * frame.equator.col(j);
        phi0.evaluate(eta, buf);
        sum += w * frame.weights(j) * (ft - buf).squaredNorm();
      }
    }
    return sum;
  };
  Estimate e;
  e.value = once(level);
  e.error = std::abs(e.value - once(std::max(3, (2 * level) / 3)));
  return e;
}

BoundaryJacobian boundary_jacobian_bounds(const Datum& phi0, const Eigen::VectorXd& theta,
                                          const std::vector<double>& phi_norms, std::optional<double> jacobian,
                                          double step) {
  const auto n = static_cast<int>(theta.size()) + 1;
  if (n < 3) throw DimensionError("boundary_jacobian_bounds: theta needs n - 1 >= 2 angles");
  if (!(step >= 1e-7)) throw DomainError("boundary_jacobian_bounds: step-size underflow");
  for (double v : phi_norms) {
    if (!(v >= 0.0)) throw DomainError("boundary_jacobian_bounds: norms must be >= 0");
  }
  // Chart degeneracy: some sin(theta_i), i < n-1, vanishes.
  double mt_exact = 1.0;
  for (int i = 0; i < n - 2; ++i) mt_exact *= std::pow(std::sin(theta(i)), n - 2 - i);
  if (std::abs(mt_exact) < 1e-6) throw DegenerateError("boundary_jacobian_bounds: chart degenerates at theta");

  auto gram_root = [](const Eigen::MatrixXd& d) {
    return std::sqrt(std::max((d.transpose() * d).determinant(), 0.0));
  };
  auto measures = [&](double h) {
    const Point t0 = chart(theta);
    const auto dim = phi0(t0).size();
    Eigen::MatrixXd dt(n, n - 1), dx(dim, n - 1);
    Eigen::VectorXd th = theta;
    for (int i = 0; i < n - 1; ++i) {
      th(i) = theta(i) + h;
      const Point tp = chart(th);
      th(i) = theta(i) - h;
      const Point tm = chart(th);
      th(i) = theta(i);
      dt.col(i) = (tp - tm) / (2.0 * h);
      dx.col(i) = (phi0(tp) - phi0(tm)) / (2.0 * h);
    }
    return std::pair{gram_root(dx), gram_root(dt)};
  };
  const auto [mx1, mt1] = measures(step);
  const auto [mx2, mt2] = measures(0.5 * step);

  BoundaryJacobian out;
  out.m_x = (4.0 * mx2 - mx1) / 3.0;
  out.m_t = (4.0 * mt2 - mt1) / 3.0;
  const double ratio = out.m_x / out.m_t;
  const double ratio_err = std::abs(mx2 / mt2 - mx1 / mt1) / 3.0;
  const Estimate lam = lambda_integral(phi0, chart(theta));
  out.lambda = lam.value;
  const double rho = green_iteration_ratio(n);
  for (std::size_t k = 1; k <= phi_norms.size(); ++k) {
    out.correction += k == 1 ? phi_norms[0] / n
                             : phi_norms[k - 1] / (n * n * (n + 2.0)) * std::pow(rho, static_cast<double>(k) - 2.0);
  }
  out.lower = ratio * (out.lambda - out.correction);
  out.upper = ratio * (out.lambda + out.correction);
  out.error = ratio * lam.error + ratio_err * (std::abs(out.lambda) + out.correction);

  BoundsReport& report = out.report;
  report.name = "boundary_jacobian";
  report.notes.push_back("M_x/M_T = " + std::to_string(ratio) + ", Lambda = " + std::to_string(out.lambda));
  const Point t = chart(theta);
  BoundsEntry order;
  order.label = "lower<=upper";
  order.point = to_vector(t);
  order.value = out.lower;
  order.bound = out.upper;
  order.error_bar = 2.0 * out.error;
  order.tolerance = kCheckTolerance;
  report.add(order);
  if (jacobian) {
    BoundsEntry up = order;
    up.label = "J<=upper";
    up.value = *jacobian;
    up.bound = out.upper;
    up.error_bar = out.error;
    report.add(up);
    BoundsEntry lo = up;
    lo.label = "J>=lower";
    lo.relation = ">=";
    lo.bound = out.lower;
    report.add(lo);
  }
  return out;
}

double mori_q_model(int n, double K) {
  if (n < 3) throw DomainError("mori_q_model: n must be >= 3");
  if (!(K >= 1.0)) throw DomainError("mori_q_model: K must be >= 1");
  constexpr double c_n = 1.0;
  return std::exp(c_n * (K - 1.0));
}

double mu1_integral(int n, double K) {
  if (n < 3) throw DomainError("mu1_integral: n must be >= 3");
  if (!(K >= 1.0)) throw DomainError("mu1_integral: K must be >= 1");
  const double alpha = std::pow(K, 1.0 / (1.0 - n));
  // |eta - p|^{-2 lambda_2} with 2 lambda_2 = n - 1 - alpha^2; c - a - b = alpha^2 > 0.
  const double l2 = 0.5 * (n - 1 - alpha * alpha);
  const double a = l2;
  const double b = l2 + 0.5 * (2 - n);
  const double c = 0.5 * n;
  if (!(c - a - b > 0.0)) throw DomainError("mu1_integral: divergent sphere integral");
  return hyp2f1(a, b, c, 1.0);
}

Estimate mu1_integral_quadrature(int n, double K, int level) {
  if (n < 3) throw DomainError("mu1_integral_quadrature: n must be >= 3");
  if (!(K >= 1.0)) throw DomainError("mu1_integral_quadrature: K must be >= 1");
  const double alpha = std::pow(K, 1.0 / (1.0 - n));
  const double expo = 1.0 - n + alpha * alpha;
  // theta = (pi/2) u^p with p = 1/alpha^2 turns theta^{alpha^2 - 1} dtheta into du.
  const double power = 1.0 / (alpha * alpha);
  auto once = [&](int lv) {
    const PolarNodes p = polar_nodes(n, lv, 1.0, power);
    double s = 0.0;
    for (std::size_t a = 0; a < p.theta.size(); ++a) s += p.weight[a] * std::pow(4.0 * p.sin_half_sq[a], 0.5 * expo);
    return s;
  };
  Estimate e;
  e.value = once(level);
  e.error = std::abs(e.value - once(std::max(2, (2 * level) / 3)));
  return e;
}

ConstantsReport lipschitz_constants(const LipschitzInputs& inp) {
  const int n = inp.n;
  const double K = inp.K;
  if (n < 3) throw DomainError("lipschitz_constants: n must be >= 3");
  if (!(K >= 1.0)) throw DomainError("lipschitz_constants: K must be >= 1");
  for (double v : inp.phi_norms) {
    if (!(v >= 0.0)) throw DomainError("lipschitz_constants: norms must be >= 0");
  }
  ConstantsReport c;
  c.n = n;
  c.K = K;
  c.q_default = !inp.q.has_value();
  c.q = inp.q ? *inp.q : mori_q_model(n, K);
  if (!(c.q > 0.0)) throw DomainError("lipschitz_constants: q must be > 0");
  c.alpha = std::pow(K, 1.0 / (1.0 - n));
  c.beta = std::pow(K, 1.0 / (n - 1.0));
  c.mu1 = std::pow(c.q, 1.0 + c.alpha) * mu1_integral(n, K);

  const double rho = green_iteration_ratio(n);
  const double delta = delta_n(n);
  double mu3_base = 0.0;
  for (std::size_t k = 1; k <= inp.phi_norms.size(); ++k) {
    const double v = inp.phi_norms[k - 1];
    if (k == 1) {
      mu3_base += v / n;
      c.mu4 += (n / (n + 1.0) + 1.0 / n) * v;
    } else {
      const double r = std::pow(rho, static_cast<double>(k) - 2.0);
      mu3_base += v / (n * n * (n + 2.0)) * r;
      c.mu4 += (delta / (2.0 * n) + 1.0 / (2.0 * n * n * (n + 2.0))) * r * v;
    }
  }
  c.mu3 = K * mu3_base;
  c.mu2 = c.mu3 + c.mu4;

  c.m1_prime = std::pow(K * c.mu1, c.beta);
  c.m1_star = std::pow(K * c.mu1 + c.mu2, c.beta);
  c.n1_prime = c.m1_star - c.m1_prime;
  const double contraction = (1.0 - c.alpha) * c.mu1;
  if (contraction < 1.0) {
    const double denom = 1.0 - contraction;
    c.mu5 = (c.alpha * c.mu1 + c.mu2) / denom;
    c.m1_second = c.alpha * c.mu1 / denom;
    c.n1_second = c.mu2 / denom;
    c.m2_star = *c.m1_second + *c.n1_second;
    c.c3 = std::min(*c.mu5, c.m1_star);
    c.c3_branch = "min";
    if (c.m1_star >= c.m2_star) {
      c.M1 = *c.m1_second;
      c.N1 = *c.n1_second;
      c.branch = "second";
    } else {
      c.M1 = c.m1_prime;
      c.N1 = c.n1_prime;
      c.branch = "prime";
    }
  } else {
    c.m2_star = std::numeric_limits<double>::infinity();
    c.c3 = c.m1_star;
    c.c3_branch = "power";
    c.M1 = c.m1_prime;
    c.N1 = c.n1_prime;
    c.branch = "prime";
  }
  return c;
}

}  // namespace polypotential
