#pragma once

// Closed-form identities reproduced by quadrature: Green mass, the weighted
// mass I_1, the n+4 sphere moment, the polar singular integral and the
// boundary derivative of the harmonic measure function.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polypotential/green_integrate.hpp"

namespace polypotential {

/// One identity at one dimension, reported at its worst sample.
struct IdentityRow {
  std::string identity;
  int n = 3;
  int samples = 0;
  double closed_form = 0.0;
  double quadrature = 0.0;
  double rel_error = 0.0;  ///< largest over the samples
  double tolerance = 0.0;
  bool pass = true;
  std::vector<double> worst_point;  ///< sample attaining rel_error (empty if not a ball point)
};

struct IdentityOptions {
  std::uint64_t seed = 1;
  int samples = 20;
  std::optional<double> tolerance;   ///< default 1e-3, 5e-3 at n = 5
  std::optional<GreenBudget> budget; ///< default {24, 48}, {16, 32} at n = 5
};

/// Rows: green_mass, weighted_mass_I1, weighted_mass_symbolic, sphere_moment, polar_integral,
/// heinz_constant, phi_decreasing. n in {3, 4, 5}.
std::vector<IdentityRow> identity_suite(int n, const IdentityOptions& opt = {});

/// |a - b| / max(|b|, tiny).
double relative_error(double a, double b);

}  // namespace polypotential
