#pragma once

// Numerical checks of the Schwarz- and Heinz-type inequalities, the gradient
// bounds for the iterated Green potentials, the boundary Jacobian sandwich and
// the Lipschitz constants of polyharmonic quasiconformal self-maps.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "polypotential/geometry.hpp"
#include "polypotential/green_integrate.hpp"
#include "polypotential/solver.hpp"

namespace polypotential {

/// One tested inequality. `relation` is "<=" (value <= bound), ">=" or "==".
/// pass means the inequality holds once the error bar is granted; violation
/// is the amount by which it fails beyond that (0 when it passes).
struct BoundsEntry {
  std::string label;
  std::vector<double> point;
  double value = 0.0;
  double bound = 0.0;
  std::string relation = "<=";
  double error_bar = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  double violation = 0.0;
  std::string note;
};

struct BoundsReport {
  std::string name;
  std::vector<BoundsEntry> entries;
  std::vector<std::string> notes;

  std::size_t violations() const;
  bool all_pass() const { return violations() == 0; }
  /// Appends an entry, filling in pass and violation.
  BoundsEntry& add(BoundsEntry e);
};

/// max over [0,1) of (2 - t^2)(1 + t), attained at t* = (-1 + sqrt 7)/3.
double c0();
double c0_argmax();
/// Grid search of the same maximum on `points` equally spaced t in [0,1).
double c0_grid_search(int points);
/// (n^2 - 4)/(3(n^2 - 1)) c0 + 4/(n(n+1)).
double delta_n(int n);

/// |f(x) - (1-|x|^2)(1+|x|^2)^{-n/2} P[phi_0](0)| against
/// ||P[phi_0]|| U(|x|N) + sum_k (||phi_k||/2n) rho^{k-1} (1 - |x|^2).
/// ||P[phi_0]||_inf = sup |phi_0| on the sphere (maximum principle), exact for presets.
BoundsReport schwarz_bound_check(const Solver& solver, const Evaluator& f, const std::vector<Point>& samples);

/// Difference quotients |f(zeta) - f(r zeta)|/(1 - r) against
/// L(n) - sum_k (||phi_k||/n) rho^{k-1} (1 + 2^{-n/2}). Throws
/// InapplicableHypothesis unless |f(0)| <= 1e-2 and ||f(zeta)| - 1| <= 1e-2.
BoundsReport heinz_liminf_check(const Solver& solver, const Evaluator& f, const Point& zeta,
                                const std::vector<double>& radii);

/// Right-hand side of the Heinz-type estimate for the solver's data.
double heinz_rhs(const Solver& solver);

struct GradientOptions {
  double step = 1e-4;           ///< interior central differences (Richardson with step/2)
  double boundary_step = 1e-3;  ///< one-sided radial stencil at |x| = 1
  GreenBudget budget{12, 24};   ///< final Green budget for the sweep
};

/// Finite-difference derivative of G_k[phi_k] compared with the interior
/// bounds (k = 1: n||phi_1||/(n+1); k >= 2: (||phi_k||/2n) rho^{k-2} delta(n))
/// and, for samples with |x| = 1, the boundary bounds (||phi_1||/n;
/// ||phi_k|| rho^{k-2}/(n^2(n+2)), the value of the normal derivative of
/// G_2 for constant phi_2).
BoundsReport gradient_bound_check(const Solver& solver, int k, const std::vector<Point>& samples,
                                  const GradientOptions& opt = {});

/// I_2(x) = int |grad_x G(x,y)| (1 - |y|^2) dV(y) in Mobius coordinates.
Estimate I2_integral(const Point& x, const GreenBudget& budget = {});
/// I_3 and I_4 of the decomposition I_2 <= I_3 + I_4, by 1-D quadrature of sphere moments.
Estimate I3_integral(const Point& x);
Estimate I4_integral(const Point& x);
/// I_2 <= delta(n) and I_2 <= I_3 + I_4 at each sample; n in {3, 4, 5}.
BoundsReport I2_bound_check(int n, const std::vector<Point>& samples, const GreenBudget& budget = {});

/// Lambda(t) = int |phi_0(t) - phi_0(eta)|^2 / |eta - t|^n dsigma(eta) by a polar rule
/// about t. Throws InapplicableHypothesis for presets without a Lipschitz constant.
Estimate lambda_integral(const Datum& phi0, const Point& t, int level = 48);

struct BoundaryJacobian {
  double m_x = 0.0;    ///< sqrt det Gram(D(phi_0 o T))
  double m_t = 0.0;    ///< sqrt det Gram(D T)
  double lambda = 0.0;
  double correction = 0.0;  ///< ||phi_1||/n + sum_{k>=2} ||phi_k|| rho^{k-2}/(n^2(n+2))
  double lower = 0.0;
  double upper = 0.0;
  double error = 0.0;  ///< error bar on lower and upper
  BoundsReport report;
};

/// Sandwich bounds for J_f(T(theta)). phi_norms = ||phi_1||, ..., ||phi_m||.
/// When `jacobian` is given it is checked against the bounds. Throws
/// DegenerateError where the chart degenerates (M_T ~ 0).
BoundaryJacobian boundary_jacobian_bounds(const Datum& phi0, const Eigen::VectorXd& theta,
                                          const std::vector<double>& phi_norms,
                                          std::optional<double> jacobian = std::nullopt, double step = 1e-4);

struct LipschitzInputs {
  int n = 3;
  double K = 1.0;
  std::optional<double> q;        ///< Mori constant; defaults to mori_q_model(n, K)
  std::vector<double> phi_norms;  ///< ||phi_1||, ..., ||phi_m||
};

/// Placeholder q(n, K) = exp(C(n)(K - 1)) with C(n) = 1, so that q(n, 1) = 1.
double mori_q_model(int n, double K);

struct ConstantsReport {
  int n = 3;
  double K = 1.0;
  double q = 1.0;
  bool q_default = true;
  double alpha = 1.0;  ///< K^{1/(1-n)}
  double beta = 1.0;   ///< K^{1/(n-1)}
  double mu1 = 0.0, mu2 = 0.0, mu3 = 0.0, mu4 = 0.0;
  std::optional<double> mu5;  ///< only when (1 - alpha) mu1 < 1
  double c3 = 0.0;
  double m1_star = 0.0, m2_star = 0.0;
  double m1_prime = 0.0, n1_prime = 0.0;
  std::optional<double> m1_second, n1_second;
  double M1 = 0.0, N1 = 0.0;
  std::string branch;  ///< "prime" or "second"
  std::string c3_branch;  ///< "power" or "min"

  double lipschitz_bound() const { return M1 + N1; }
};

/// mu_3 carries the factor K (mu_3 = K mu_3'), as in the final piecewise
/// definition of C_3; some intermediate displays of the same estimate use mu_1
/// without K. C_3 = min(mu_5, M_1*) when (1 - alpha) mu_1 < 1, else M_1*.
/// The "second" branch is taken when M_1* >= M_2* (ties included).
ConstantsReport lipschitz_constants(const LipschitzInputs& inp);

/// mu_1 / q^{1+alpha} = int |eta - p|^{1-n+alpha^2} dsigma by Gauss' closed form
/// and by a power-graded polar quadrature.
double mu1_integral(int n, double K);
Estimate mu1_integral_quadrature(int n, double K, int level = 64);

}  // namespace polypotential
