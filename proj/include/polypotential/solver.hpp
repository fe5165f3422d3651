#pragma once

// Dirichlet data presets, the problem description, grid functions and the
// solver for the polyharmonic chain
//   f = P[phi_0] + sum_{k=1}^m (-1)^k G_k[phi_k],
// where G_k[phi_k] = G^k P[phi_k] for k < m and G_m[phi_m] = G^m phi_m.

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polypotential/geometry.hpp"
#include "polypotential/green_integrate.hpp"
#include "polypotential/quadrature.hpp"

namespace polypotential {

enum class PresetKind { Zero, Const, RadialPoly, Coordinate, HemisphereSign };

/// An evaluatable datum with values in R^{target_dim}. Boundary data are
/// evaluated on the sphere, the source phi_m on the closed ball.
struct Datum {
  PresetKind kind = PresetKind::Zero;
  Eigen::VectorXd value;      ///< Const
  std::vector<double> coeffs; ///< RadialPoly: sum_k coeffs[k] |p|^{2k}
  Eigen::VectorXd direction;  ///< RadialPoly, Coordinate(index), HemisphereSign
  int index = -1;             ///< Coordinate: p_index * direction
  Eigen::MatrixXd matrix;     ///< Coordinate: A p (target_dim x n)
  /// Coordinate with neither index nor matrix is the identity map (target_dim == n).

  static Datum zero();
  static Datum constant(const Eigen::VectorXd& v);
  static Datum radial_poly(std::vector<double> coeffs, const Eigen::VectorXd& direction);
  static Datum coordinate(int index, const Eigen::VectorXd& direction);
  static Datum linear(const Eigen::MatrixXd& a);
  static Datum identity();
  static Datum hemisphere_sign(const Eigen::VectorXd& direction);

  bool is_zero() const { return kind == PresetKind::Zero; }
  void evaluate(const Point& p, Eigen::Ref<Eigen::VectorXd> out) const;
  Eigen::VectorXd operator()(const Point& p) const;

  /// sup |datum| on the sphere (on_ball = false) or the closed ball. Exact
  /// except for radial polynomials on the ball, where a dense grid in t is used.
  double sup_norm(int n, bool on_ball) const;
  /// Lipschitz constant of the restriction to the sphere, if the preset has one.
  std::optional<double> lipschitz_constant(int n) const;
  std::string name() const;
};

struct SolverBudget {
  int sphere_level = 24;  ///< final Green integration
  int radial = 48;
  int grid_level = 8;     ///< grid carrying intermediate potentials
  int grid_radial = 12;
  int row_level = 8;      ///< Green integration per grid node
  int row_radial = 16;
  int poisson_level = 24; ///< Poisson integrals

  GreenBudget final_budget() const { return {sphere_level, radial}; }
  GreenBudget row_budget() const { return {row_level, row_radial}; }
};

/// Dimension-dependent defaults (smaller grids for n >= 4).
SolverBudget default_solver_budget(int n);

struct ProblemSpec {
  int n = 3;
  int m = 2;
  int target_dim = 3;
  std::vector<Datum> phi;  ///< phi_0 .. phi_m
  SolverBudget budget;

  /// Throws SchemaError when the fields are inconsistent. `allow_m1` admits
  /// the Poisson-equation case used internally for shifted chains.
  void validate(bool allow_m1 = false) const;
};

/// Parses {"n":..,"m":..,"target_dim":..,"phi":[...],"budget":{...}}; unknown keys are rejected.
ProblemSpec problem_spec_from_json(std::string_view text);
std::string problem_spec_to_json(const ProblemSpec& spec);

/// Values of a vector field on the nodes of a BallRule plus its boundary
/// values at the rule's directions (r = 1), with tensor cubic interpolation
/// in (r, t_1, ..., t_{n-1}); the last angle is periodic.
class GridFunction {
 public:
  GridFunction(std::shared_ptr<const BallRule> rule, int dim);

  const BallRule& rule() const { return *rule_; }
  int dim() const { return dim_; }
  Eigen::MatrixXd& values() { return values_; }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::MatrixXd& boundary() { return boundary_; }
  const Eigen::MatrixXd& boundary() const { return boundary_; }

  void interpolate(const Point& y, Eigen::Ref<Eigen::VectorXd> out) const;

 private:
  std::shared_ptr<const BallRule> rule_;
  int dim_;
  Eigen::MatrixXd values_;    ///< dim x nodes
  Eigen::MatrixXd boundary_;  ///< dim x directions
  std::vector<double> radii_ext_;
};

/// Points at which |x| >= 1 - kBoundaryBand are evaluated from boundary data.
inline constexpr double kBoundaryBand = 1e-6;

class Solver {
 public:
  explicit Solver(ProblemSpec spec);

  const ProblemSpec& spec() const { return spec_; }
  int dimension() const { return spec_.n; }

  /// P[phi](x) by a normalized focused sphere rule; error from two levels.
  VectorEstimate poisson_extend(const Datum& phi, const Point& x) const;
  VectorEstimate poisson_extend(const Datum& phi, const Point& x, int level) const;

  /// G_k[phi_k](x) for 1 <= k <= m.
  VectorEstimate green_chain(int k, const Point& x) const;
  VectorEstimate green_chain(int k, const Point& x, const GreenBudget& final_budget) const;

  /// The representation formula at x.
  VectorEstimate solve(const Point& x) const;
  VectorEstimate solve(const Point& x, const GreenBudget& final_budget) const;

  /// ||phi_k||_inf (sphere for k < m, ball for k = m).
  double datum_norm(int k) const;
  /// (||phi_k|| / 2n) [(n+4)/(4n(n+2))]^{k-1} (1 - |x|^2).
  double chain_bound(int k, const Point& x) const;

  /// Estimated sup-norm error of the interpolated top grid layer of chain k.
  double layer_error(int k) const;

 private:
  struct Layer {
    std::unique_ptr<GridFunction> top;
    double error = 0.0;
  };

  const Layer& layer(int k) const;
  void build_layer(int k, Layer& out) const;
  Eigen::VectorXd poisson_once(const Datum& phi, const Point& x, int level) const;

  ProblemSpec spec_;
  std::shared_ptr<const BallRule> grid_;
  mutable std::vector<Layer> layers_;
  mutable std::vector<std::unique_ptr<std::once_flag>> layer_once_;
};

/// Density rho = (n+4)/(4n(n+2)) of the iterated Green bounds.
double green_iteration_ratio(int n);

using Evaluator = std::function<VectorEstimate(const Point&)>;

struct ResidualReport {
  std::vector<double> residual;       ///< |Delta f(x) - expected(x)| per sample
  std::vector<double> laplacian_norm; ///< |Delta f(x)| per sample
  double max_residual = 0.0;
  double laplacian_bound = 0.0;       ///< ||phi_1|| + sum_k (||phi_{k+1}||/2n) rho^{k-1}
  bool bound_holds = true;
  double step = 0.0;
};

/// Five-point finite-difference Laplacian (per coordinate) of f at x.
Eigen::VectorXd fd_laplacian(const Evaluator& f, const Point& x, double step);

/// Compares the finite-difference Laplacian of `f` with `expected` (or, when
/// `expected` is empty, with the solution of the shifted chain phi_1..phi_m).
/// Samples must satisfy |x| <= 0.8.
ResidualReport residual_check(const Solver& solver, const Evaluator& f, const std::vector<Point>& samples,
                              const Evaluator& expected = {}, double step = 1e-2);

}  // namespace polypotential
