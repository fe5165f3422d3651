#pragma once

// JSON and CSV writers for identity rows, bounds reports, constant tables and
// solver values. Every document carries schema_version and the run seed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polypotential/identities.hpp"
#include "polypotential/inequality_lab.hpp"

namespace polypotential {

inline constexpr int kSchemaVersion = 1;

/// printf("%.17g"); "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

std::string identities_json(const std::vector<IdentityRow>& rows, std::uint64_t seed);
std::string identities_csv(const std::vector<IdentityRow>& rows, std::uint64_t seed);

std::string bounds_json(const std::vector<BoundsReport>& reports, std::uint64_t seed);
/// One row per entry: report, index, label, relation, value, bound, error_bar, violation, pass, point.
std::string bounds_csv(const std::vector<BoundsReport>& reports, std::uint64_t seed);

/// One (n, K, norm set) cell of a constants table.
struct ConstantsCell {
  int n = 3;
  double K = 1.0;
  int norm_set = 0;
  std::vector<double> norms;
  double heinz = 0.0;
  double c0 = 0.0;
  double delta = 0.0;
  std::optional<ConstantsReport> constants;  ///< empty when the cell could not be evaluated
  std::string status = "ok";                 ///< "ok", "mu5_undefined" or the error message
};

std::string constants_json(const std::vector<ConstantsCell>& cells, std::uint64_t seed);
std::string constants_csv(const std::vector<ConstantsCell>& cells, std::uint64_t seed);

struct SolvedPoint {
  Point x;
  Eigen::VectorXd value;
  double error = 0.0;
};

/// Columns schema_version, seed, index, x0.., f0.., error.
std::string solve_csv(const std::vector<SolvedPoint>& rows, std::uint64_t seed);
std::string solve_json(const std::vector<SolvedPoint>& rows, std::uint64_t seed);

}  // namespace polypotential
