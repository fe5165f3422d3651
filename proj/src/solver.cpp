#include "polypotential/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "polypotential/errors.hpp"
#include "polypotential/kernels.hpp"
#include "polypotential/parallel.hpp"

namespace polypotential {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxGridDim = 6;

// Lagrange weights of the points xs[0..count) at t.
void lagrange(const double* xs, int count, double t, double* w) {
  for (int i = 0; i < count; ++i) {
    double v = 1.0;
    for (int j = 0; j < count; ++j) {
      if (j != i) v *= (t - xs[j]) / (xs[i] - xs[j]);
    }
    w[i] = v;
  }
}

// Window of up to four consecutive nodes around t on a sorted axis.
int window_start(const std::vector<double>& nodes, int width, double t) {
  const int size = static_cast<int>(nodes.size());
  const int j = static_cast<int>(std::upper_bound(nodes.begin(), nodes.end(), t) - nodes.begin()) - 1;
  return std::clamp(j - (width / 2 - 1), 0, size - width);
}

// Deterministic probe points spread over the ball for layer error estimates.
std::vector<Point> probe_points(int n) {
  static constexpr std::array<double, 8> radii = {0.1, 0.3, 0.5, 0.65, 0.75, 0.85, 0.9, 0.95};
  std::vector<Point> out;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    Point p(n);
    for (int c = 0; c < n; ++c) p(c) = std::sin(1.7 * (i + 1) * (c + 1) + 0.3 * c + 0.1 * i);
    out.push_back(radii[i] * p.normalized());
  }
  return out;
}

void check_point(int n, const Point& x, const char* who) {
  if (x.size() != n) throw DimensionError(std::string(who) + ": point has the wrong dimension");
  if (!x.allFinite()) throw DomainError(std::string(who) + ": non-finite point");
}

}  // namespace

double green_iteration_ratio(int n) { return (n + 4.0) / (4.0 * n * (n + 2.0)); }

GridFunction::GridFunction(std::shared_ptr<const BallRule> rule, int dim)
    : rule_(std::move(rule)), dim_(dim) {
  if (!rule_) throw DomainError("GridFunction: null rule");
  if (rule_->n > kMaxGridDim) throw DimensionError("GridFunction: n > 6 is not supported");
  values_ = Eigen::MatrixXd::Zero(dim, rule_->size());
  boundary_ = Eigen::MatrixXd::Zero(dim, rule_->directions.size());
  radii_ext_ = rule_->radii;
  radii_ext_.push_back(1.0);
}

void GridFunction::interpolate(const Point& y, Eigen::Ref<Eigen::VectorXd> out) const {
  const int n = rule_->n;
  const auto ndirs = static_cast<int>(rule_->directions.size());
  const int nradial = static_cast<int>(rule_->radii.size());

  // Spherical coordinates of y without allocation.
  std::array<double, kMaxGridDim> coord{};
  coord[0] = y.norm();
  double tail2 = coord[0] * coord[0];
  for (int i = 0; i < n - 2; ++i) {
    tail2 = std::max(tail2 - y(i) * y(i), 0.0);
    coord[i + 1] = std::atan2(std::sqrt(tail2), y(i));
  }
  double last = std::atan2(y(n - 1), y(n - 2));
  if (last < 0.0) last += 2.0 * kPi;
  coord[n - 1] = last;

  // Per-axis stencil: base index (into the axis), count, weights, stride.
  std::array<std::array<int, 4>, kMaxGridDim> idx{};
  std::array<std::array<double, 4>, kMaxGridDim> w{};
  std::array<int, kMaxGridDim> count{};
  std::array<int, kMaxGridDim> stride{};

  auto sorted_axis = [&](int axis, const std::vector<double>& nodes, double t) {
    const int width = std::min<int>(4, static_cast<int>(nodes.size()));
    const int s = window_start(nodes, width, t);
    count[axis] = width;
    for (int i = 0; i < width; ++i) idx[axis][i] = s + i;
    lagrange(nodes.data() + s, width, t, w[axis].data());
  };

  sorted_axis(0, radii_ext_, coord[0]);
  int dir_stride = 1;
  {
    const auto& nodes = rule_->directions.angles[n - 2];
    const int size = static_cast<int>(nodes.size());
    const double h = 2.0 * kPi / size;
    const int width = std::min(4, size);
    const int j = static_cast<int>(std::floor(coord[n - 1] / h - 0.5));
    const int s = j - (width / 2 - 1);
    std::array<double, 4> xs{};
    for (int i = 0; i < width; ++i) {
      xs[i] = (s + i + 0.5) * h;
      idx[n - 1][i] = ((s + i) % size + size) % size;
    }
    lagrange(xs.data(), width, coord[n - 1], w[n - 1].data());
    count[n - 1] = width;
    stride[n - 1] = 1;
    dir_stride = size;
  }
  for (int a = n - 2; a >= 1; --a) {
    const auto& nodes = rule_->directions.angles[a - 1];
    sorted_axis(a, nodes, coord[a]);
    stride[a] = dir_stride;
    dir_stride *= static_cast<int>(nodes.size());
  }

  out.setZero();
  std::array<int, kMaxGridDim> pos{};
  while (true) {
    double weight = w[0][pos[0]];
    int dir = 0;
    for (int a = 1; a < n; ++a) {
      weight *= w[a][pos[a]];
      dir += idx[a][pos[a]] * stride[a];
    }
    const int ri = idx[0][pos[0]];
    if (ri == nradial) {
      out.noalias() += weight * boundary_.col(dir);
    } else {
      out.noalias() += weight * values_.col(static_cast<Eigen::Index>(ri) * ndirs + dir);
    }
    int a = n - 1;
    for (; a >= 0; --a) {
      if (++pos[a] < count[a]) break;
      pos[a] = 0;
    }
    if (a < 0) break;
  }
}

Solver::Solver(ProblemSpec spec) : spec_(std::move(spec)) {
  spec_.validate(true);
  const SolverBudget& b = spec_.budget;
  grid_ = std::make_shared<const BallRule>(ball_rule(spec_.n, b.grid_level, b.grid_radial));
  layers_.resize(spec_.m + 1);
  for (int k = 0; k <= spec_.m; ++k) layer_once_.push_back(std::make_unique<std::once_flag>());
}

Eigen::VectorXd Solver::poisson_once(const Datum& phi, const Point& x, int level) const {
  const int n = spec_.n;
  const double s = x.norm();
  Point axis = Point::Zero(n);
  if (s > 0.0) {
    axis = x / s;
  } else {
    axis(0) = 1.0;
  }
  const AxisFrame frame = make_axis_frame(axis, std::max(1, (level + 1) / 2));
  const PolarNodes polar = polar_nodes(n, level, focus_width(s));
  const double q = 1.0 - s * s;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(spec_.target_dim);
  Eigen::VectorXd buf(spec_.target_dim);
  Point zeta(n);
  double mass = 0.0;
  for (std::size_t a = 0; a < polar.theta.size(); ++a) {
    const double d = (1.0 - s) * (1.0 - s) + 4.0 * s * polar.sin_half_sq[a];
    const double kw = polar.weight[a] * q / std::pow(d, 0.5 * n);
    for (Eigen::Index j = 0; j < frame.equator.cols(); ++j) {
      zeta.noalias() = polar.cos_theta[a] * frame.axis + polar.sin_theta[a] * frame.equator.col(j);
      const double wj = kw * frame.weights(j);
      phi.evaluate(zeta, buf);
      acc.noalias() += wj * buf;
      mass += wj;
    }
  }
  // Dividing by the discrete kernel mass makes constants exact.
  acc /= mass;
  if (!acc.allFinite()) throw DomainError("poisson_extend: non-finite result");
  return acc;
}

VectorEstimate Solver::poisson_extend(const Datum& phi, const Point& x) const {
  return poisson_extend(phi, x, spec_.budget.poisson_level);
}

VectorEstimate Solver::poisson_extend(const Datum& phi, const Point& x, int level) const {
  check_point(spec_.n, x, "poisson_extend");
  if (!(x.norm() < 1.0 - kBoundaryBand)) {
    throw DomainError("poisson_extend: |x| >= 1 - 1e-6; use the boundary values directly");
  }
  if (level < 2) throw DomainError("poisson_extend: level must be >= 2");
  VectorEstimate e;
  if (phi.is_zero()) {
    e.value = Eigen::VectorXd::Zero(spec_.target_dim);
    return e;
  }
  e.value = poisson_once(phi, x, level);
  const Eigen::VectorXd coarse = poisson_once(phi, x, std::max(2, (2 * level) / 3));
  e.error = (e.value - coarse).cwiseAbs().maxCoeff();
  return e;
}

double Solver::datum_norm(int k) const {
  if (k < 0 || k > spec_.m) throw DomainError("datum_norm: index out of range");
  return spec_.phi[k].sup_norm(spec_.n, k == spec_.m);
}

double Solver::chain_bound(int k, const Point& x) const {
  if (k < 1 || k > spec_.m) throw DomainError("chain_bound: k out of range");
  const int n = spec_.n;
  return datum_norm(k) / (2.0 * n) * std::pow(green_iteration_ratio(n), k - 1) *
         std::max(1.0 - x.squaredNorm(), 0.0);
}

double Solver::layer_error(int k) const {
  if (k < 1 || k > spec_.m) throw DomainError("layer_error: k out of range");
  if (spec_.phi[k].is_zero()) return 0.0;
  return layer(k).error;
}

const Solver::Layer& Solver::layer(int k) const {
  std::call_once(*layer_once_[k], [&] { build_layer(k, layers_[k]); });
  return layers_[k];
}

void Solver::build_layer(int k, Layer& out) const {
  const int n = spec_.n;
  const int dim = spec_.target_dim;
  const Datum& phi = spec_.phi[k];
  const BallRule& grid = *grid_;
  const SolverBudget& b = spec_.budget;
  const std::vector<Point> probes = probe_points(n);

  std::unique_ptr<GridFunction> cur;
  double error = 0.0;
  if (k < spec_.m) {
    cur = std::make_unique<GridFunction>(grid_, dim);
    GridFunction& g = *cur;
    parallel_for(static_cast<std::size_t>(grid.size()), [&](std::size_t i) {
      g.values().col(i) = poisson_once(phi, grid.nodes.col(i), b.poisson_level);
    });
    for (Eigen::Index d = 0; d < grid.directions.size(); ++d) {
      phi.evaluate(grid.directions.nodes.col(d), g.boundary().col(d));
    }
    Eigen::VectorXd buf(dim);
    for (const Point& p : probes) {
      const VectorEstimate direct = poisson_extend(phi, p, b.poisson_level);
      g.interpolate(p, buf);
      error = std::max(error, (buf - direct.value).cwiseAbs().maxCoeff() + direct.error);
    }
  }

  for (int j = 1; j < k; ++j) {
    auto source = [&](const Point& y, Eigen::Ref<Eigen::VectorXd> v) {
      if (cur) {
        cur->interpolate(y, v);
      } else {
        phi.evaluate(y, v);
      }
    };
    auto next = std::make_unique<GridFunction>(grid_, dim);
    GridFunction& g = *next;
    parallel_for(static_cast<std::size_t>(grid.size()), [&](std::size_t i) {
      const MobiusRule rule(grid.nodes.col(i), b.row_budget());
      g.values().col(i) = green_integrate_vector_once(rule, dim, source);
    });
    double probe_error = 0.0;
    Eigen::VectorXd buf(dim);
    for (const Point& p : probes) {
      const VectorEstimate direct = green_integrate_vector(p, dim, source, b.row_budget());
      g.interpolate(p, buf);
      probe_error = std::max(probe_error, (buf - direct.value).cwiseAbs().maxCoeff() + direct.error);
    }
    error = probe_error + error / (2.0 * n);
    cur = std::move(next);
  }
  out.top = std::move(cur);
  out.error = error;
}

VectorEstimate Solver::green_chain(int k, const Point& x) const {
  return green_chain(k, x, spec_.budget.final_budget());
}

VectorEstimate Solver::green_chain(int k, const Point& x, const GreenBudget& final_budget) const {
  if (k < 1 || k > spec_.m) throw DomainError("green_chain: k out of range");
  check_point(spec_.n, x, "green_chain");
  const double s = x.norm();
  if (!(s < 1.0)) throw DomainError("green_chain: |x| must be < 1");
  VectorEstimate e;
  e.value = Eigen::VectorXd::Zero(spec_.target_dim);
  const Datum& phi = spec_.phi[k];
  if (phi.is_zero()) return e;
  if (s >= 1.0 - kBoundaryBand) {
    // G_k vanishes on the sphere; the chain bound covers the band.
    e.error = chain_bound(k, x);
    return e;
  }
  const Layer& top = layer(k);
  auto source = [&](const Point& y, Eigen::Ref<Eigen::VectorXd> v) {
    if (top.top) {
      top.top->interpolate(y, v);
    } else {
      phi.evaluate(y, v);
    }
  };
  e = green_integrate_vector(x, spec_.target_dim, source, final_budget);
  e.error += top.error * (1.0 - s * s) / (2.0 * spec_.n);
  return e;
}

VectorEstimate Solver::solve(const Point& x) const { return solve(x, spec_.budget.final_budget()); }

VectorEstimate Solver::solve(const Point& x, const GreenBudget& final_budget) const {
  check_point(spec_.n, x, "solve");
  const double s = x.norm();
  if (s > 1.0 + kSphereTolerance) throw DomainError("solve: |x| must be <= 1");
  VectorEstimate e;
  e.value = Eigen::VectorXd::Zero(spec_.target_dim);
  if (s >= 1.0 - kBoundaryBand) {
    spec_.phi[0].evaluate(x / s, e.value);
    for (int k = 1; k <= spec_.m; ++k) e.error += chain_bound(k, x);
    return e;
  }
  if (!spec_.phi[0].is_zero()) e = poisson_extend(spec_.phi[0], x);
  for (int k = 1; k <= spec_.m; ++k) {
    if (spec_.phi[k].is_zero()) continue;
    const VectorEstimate g = green_chain(k, x, final_budget);
    e.value += (k % 2 == 0 ? 1.0 : -1.0) * g.value;
    e.error += g.error;
  }
  return e;
}

Eigen::VectorXd fd_laplacian(const Evaluator& f, const Point& x, double step) {
  if (!(step >= 1e-6)) throw DomainError("fd_laplacian: step-size underflow");
  const Eigen::VectorXd centre = f(x).value;
  Eigen::VectorXd lap = -30.0 * static_cast<double>(x.size()) * centre;
  Point p = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (auto [offset, weight] : {std::pair{2.0, -1.0}, {1.0, 16.0}, {-1.0, 16.0}, {-2.0, -1.0}}) {
      p(i) = x(i) + offset * step;
      lap += weight * f(p).value;
    }
    p(i) = x(i);
  }
  return lap / (12.0 * step * step);
}

ResidualReport residual_check(const Solver& solver, const Evaluator& f, const std::vector<Point>& samples,
                              const Evaluator& expected, double step) {
  const ProblemSpec& spec = solver.spec();
  if (!(step >= 1e-6)) throw DomainError("residual_check: step-size underflow");
  for (const Point& x : samples) {
    check_point(spec.n, x, "residual_check");
    if (x.norm() > 0.8) throw DomainError("residual_check: samples must satisfy |x| <= 0.8");
  }
  Evaluator reference = expected;
  std::shared_ptr<Solver> shifted;
  if (!reference) {
    if (spec.m < 2) throw DomainError("residual_check: the shifted chain needs m >= 2");
    ProblemSpec s = spec;
    s.m = spec.m - 1;
    s.phi.assign(spec.phi.begin() + 1, spec.phi.end());
    shifted = std::make_shared<Solver>(std::move(s));
    reference = [shifted](const Point& x) { return shifted->solve(x); };
  }

  ResidualReport report;
  report.step = step;
  const int n = spec.n;
  const double rho = green_iteration_ratio(n);
  report.laplacian_bound = solver.datum_norm(1);
  for (int k = 1; k <= spec.m - 1; ++k) {
    report.laplacian_bound += solver.datum_norm(k + 1) / (2.0 * n) * std::pow(rho, k - 1);
  }
  for (const Point& x : samples) {
    const Eigen::VectorXd lap = fd_laplacian(f, x, step);
    const Eigen::VectorXd ref = reference(x).value;
    const double r = (lap - ref).norm();
    report.residual.push_back(r);
    report.laplacian_norm.push_back(lap.norm());
    report.max_residual = std::max(report.max_residual, r);
    // The residual serves as the error bar of the finite-difference Laplacian.
    if (lap.norm() > report.laplacian_bound + std::max(r, 1e-9)) report.bound_holds = false;
  }
  return report;
}

}  // namespace polypotential
