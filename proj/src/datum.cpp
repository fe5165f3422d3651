#include <json.hpp>

#include <cmath>
#include <set>

#include "polypotential/errors.hpp"
#include "polypotential/solver.hpp"

namespace polypotential {

using nlohmann::json;

Datum Datum::zero() { return {}; }

Datum Datum::constant(const Eigen::VectorXd& v) {
  Datum d;
  d.kind = PresetKind::Const;
  d.value = v;
  return d;
}

Datum Datum::radial_poly(std::vector<double> coeffs, const Eigen::VectorXd& direction) {
  Datum d;
  d.kind = PresetKind::RadialPoly;
  d.coeffs = std::move(coeffs);
  d.direction = direction;
  return d;
}

Datum Datum::coordinate(int index, const Eigen::VectorXd& direction) {
  Datum d;
  d.kind = PresetKind::Coordinate;
  d.index = index;
  d.direction = direction;
  return d;
}

Datum Datum::linear(const Eigen::MatrixXd& a) {
  Datum d;
  d.kind = PresetKind::Coordinate;
  d.matrix = a;
  return d;
}

Datum Datum::identity() {
  Datum d;
  d.kind = PresetKind::Coordinate;
  return d;
}

Datum Datum::hemisphere_sign(const Eigen::VectorXd& direction) {
  Datum d;
  d.kind = PresetKind::HemisphereSign;
  d.direction = direction;
  return d;
}

void Datum::evaluate(const Point& p, Eigen::Ref<Eigen::VectorXd> out) const {
  switch (kind) {
    case PresetKind::Zero:
      out.setZero();
      return;
    case PresetKind::Const:
      out = value;
      return;
    case PresetKind::RadialPoly: {
      const double t = p.squaredNorm();
      double v = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * t + *it;
      out = v * direction;
      return;
    }
    case PresetKind::Coordinate:
      if (index >= 0) {
        out = p(index) * direction;
      } else if (matrix.size() > 0) {
        out.noalias() = matrix * p;
      } else {
        out = p;
      }
      return;
    case PresetKind::HemisphereSign: {
      const double s = p(p.size() - 1);
      out = (s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0)) * direction;
      return;
    }
  }
}

Eigen::VectorXd Datum::operator()(const Point& p) const {
  Eigen::Index dim = 0;
  switch (kind) {
    case PresetKind::Zero:
      throw DimensionError("Datum: zero preset has no intrinsic dimension; use evaluate()");
    case PresetKind::Const:
      dim = value.size();
      break;
    case PresetKind::Coordinate:
      dim = index >= 0 ? direction.size() : (matrix.size() > 0 ? matrix.rows() : p.size());
      break;
    default:
      dim = direction.size();
  }
  Eigen::VectorXd out(dim);
  evaluate(p, out);
  return out;
}

double Datum::sup_norm(int n, bool on_ball) const {
  switch (kind) {
    case PresetKind::Zero:
      return 0.0;
    case PresetKind::Const:
      return value.norm();
    case PresetKind::RadialPoly: {
      auto eval = [&](double t) {
        double v = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * t + *it;
        return std::abs(v);
      };
      double s = eval(1.0);
      if (on_ball) {
        for (int i = 0; i <= 4000; ++i) s = std::max(s, eval(i / 4000.0));
      }
      return s * direction.norm();
    }
    case PresetKind::Coordinate:
      if (index >= 0) return direction.norm();
      if (matrix.size() > 0) return operator_norm(matrix);
      return 1.0;
    case PresetKind::HemisphereSign:
      return direction.norm();
  }
  (void)n;
  return 0.0;
}

std::optional<double> Datum::lipschitz_constant(int n) const {
  (void)n;
  switch (kind) {
    case PresetKind::Zero:
    case PresetKind::Const:
      return 0.0;
    case PresetKind::RadialPoly:
      return 0.0;  // constant on the sphere
    case PresetKind::Coordinate:
      if (index >= 0) return direction.norm();
      if (matrix.size() > 0) return operator_norm(matrix);
      return 1.0;
    case PresetKind::HemisphereSign:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string Datum::name() const {
  switch (kind) {
    case PresetKind::Zero: return "zero";
    case PresetKind::Const: return "const";
    case PresetKind::RadialPoly: return "radial_poly";
    case PresetKind::Coordinate: return "coordinate";
    case PresetKind::HemisphereSign: return "hemisphere_sign";
  }
  return "unknown";
}

SolverBudget default_solver_budget(int n) {
  SolverBudget b;
  if (n == 4) {
    b.grid_level = 5;
    b.grid_radial = 8;
    b.row_level = 6;
    b.row_radial = 12;
    b.sphere_level = 16;
    b.radial = 32;
  } else if (n >= 5) {
    b.grid_level = 4;
    b.grid_radial = 6;
    b.row_level = 4;
    b.row_radial = 8;
    b.sphere_level = 12;
    b.radial = 24;
    b.poisson_level = 16;
  }
  return b;
}

void ProblemSpec::validate(bool allow_m1) const {
  if (n < 3) throw SchemaError("problem: n must be >= 3");
  if (n > 6) throw SchemaError("problem: n > 6 is not supported");
  if (m < (allow_m1 ? 1 : 2)) throw SchemaError("problem: m must be >= 2");
  if (target_dim < 1) throw SchemaError("problem: target_dim must be >= 1");
  if (static_cast<int>(phi.size()) != m + 1) throw SchemaError("problem: phi must list m + 1 data");
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const Datum& d = phi[k];
    const std::string where = "phi[" + std::to_string(k) + "]: ";
    switch (d.kind) {
      case PresetKind::Zero:
        break;
      case PresetKind::Const:
        if (d.value.size() != target_dim) throw SchemaError(where + "value length must equal target_dim");
        if (!d.value.allFinite()) throw SchemaError(where + "non-finite value");
        break;
      case PresetKind::RadialPoly:
        if (d.coeffs.empty()) throw SchemaError(where + "coeffs must be non-empty");
        if (d.direction.size() != target_dim) throw SchemaError(where + "direction length must equal target_dim");
        for (double c : d.coeffs)
          if (!std::isfinite(c)) throw SchemaError(where + "non-finite coefficient");
        break;
      case PresetKind::Coordinate:
        if (d.index >= 0) {
          if (d.index >= n) throw SchemaError(where + "index out of range");
          if (d.direction.size() != target_dim) throw SchemaError(where + "direction length must equal target_dim");
        } else if (d.matrix.size() > 0) {
          if (d.matrix.rows() != target_dim || d.matrix.cols() != n) {
            throw SchemaError(where + "matrix must be target_dim x n");
          }
        } else if (target_dim != n) {
          throw SchemaError(where + "identity coordinate map needs target_dim == n");
        }
        break;
      case PresetKind::HemisphereSign:
        if (d.direction.size() != target_dim) throw SchemaError(where + "direction length must equal target_dim");
        break;
    }
  }
  const SolverBudget& b = budget;
  for (int v : {b.sphere_level, b.radial, b.grid_level, b.grid_radial, b.row_level, b.row_radial, b.poisson_level}) {
    if (v < 2) throw SchemaError("problem: budget entries must be >= 2");
  }
  if (b.grid_radial < 3) throw SchemaError("problem: grid_radial must be >= 3");
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw SchemaError(where + ": unknown key '" + it.key() + "'");
  }
}

Eigen::VectorXd read_vector(const json& j, const std::string& where) {
  if (j.is_number()) return Eigen::VectorXd::Constant(1, j.get<double>());
  if (!j.is_array()) throw SchemaError(where + ": expected a number array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError(where + ": expected numbers");
    v(i) = j[i].get<double>();
  }
  return v;
}

Eigen::VectorXd unit(int dim, int i) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
  e(i) = 1.0;
  return e;
}

Datum read_datum(const json& j, int n, int target_dim, const std::string& where) {
  if (!j.is_object() || !j.contains("preset") || !j["preset"].is_string()) {
    throw SchemaError(where + ": expected {\"preset\": name, ...}");
  }
  const std::string preset = j["preset"].get<std::string>();
  if (preset == "zero") {
    reject_unknown(j, {"preset"}, where);
    return Datum::zero();
  }
  if (preset == "const") {
    reject_unknown(j, {"preset", "value"}, where);
    if (!j.contains("value")) throw SchemaError(where + ": const needs 'value'");
    return Datum::constant(read_vector(j["value"], where + ".value"));
  }
  auto direction = [&](const json& obj) {
    return obj.contains("direction") ? read_vector(obj["direction"], where + ".direction") : unit(target_dim, 0);
  };
  if (preset == "radial_poly") {
    reject_unknown(j, {"preset", "coeffs", "direction"}, where);
    if (!j.contains("coeffs")) throw SchemaError(where + ": radial_poly needs 'coeffs'");
    const Eigen::VectorXd c = read_vector(j["coeffs"], where + ".coeffs");
    return Datum::radial_poly(std::vector<double>(c.data(), c.data() + c.size()), direction(j));
  }
  if (preset == "coordinate") {
    reject_unknown(j, {"preset", "index", "direction", "matrix"}, where);
    if (j.contains("index") && j.contains("matrix")) throw SchemaError(where + ": give either 'index' or 'matrix'");
    if (j.contains("index")) {
      if (!j["index"].is_number_integer()) throw SchemaError(where + ".index: expected an integer");
      const int idx = j["index"].get<int>();
      if (idx < 0 || idx >= n) throw SchemaError(where + ".index: out of range");
      return Datum::coordinate(idx, direction(j));
    }
    if (j.contains("direction")) throw SchemaError(where + ": 'direction' requires 'index'");
    if (j.contains("matrix")) {
      const json& mj = j["matrix"];
      if (!mj.is_array() || mj.empty()) throw SchemaError(where + ".matrix: expected rows");
      Eigen::MatrixXd a(mj.size(), n);
      for (std::size_t r = 0; r < mj.size(); ++r) {
        const Eigen::VectorXd row = read_vector(mj[r], where + ".matrix");
        if (row.size() != n) throw SchemaError(where + ".matrix: each row needs n entries");
        a.row(r) = row.transpose();
      }
      return Datum::linear(a);
    }
    return Datum::identity();
  }
  if (preset == "hemisphere_sign") {
    reject_unknown(j, {"preset", "direction"}, where);
    return Datum::hemisphere_sign(direction(j));
  }
  throw SchemaError(where + ": unknown preset '" + preset + "'");
}

json write_vector(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json write_datum(const Datum& d) {
  json j;
  j["preset"] = d.name();
  switch (d.kind) {
    case PresetKind::Zero:
      break;
    case PresetKind::Const:
      j["value"] = write_vector(d.value);
      break;
    case PresetKind::RadialPoly:
      j["coeffs"] = d.coeffs;
      j["direction"] = write_vector(d.direction);
      break;
    case PresetKind::Coordinate:
      if (d.index >= 0) {
        j["index"] = d.index;
        j["direction"] = write_vector(d.direction);
      } else if (d.matrix.size() > 0) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < d.matrix.rows(); ++r) rows.push_back(write_vector(d.matrix.row(r).transpose()));
        j["matrix"] = rows;
      }
      break;
    case PresetKind::HemisphereSign:
      j["direction"] = write_vector(d.direction);
      break;
  }
  return j;
}

}  // namespace

ProblemSpec problem_spec_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("problem: invalid JSON: ") + e.what());
  }
  reject_unknown(j, {"n", "m", "target_dim", "phi", "budget"}, "problem");
  for (const char* key : {"n", "m", "phi"}) {
    if (!j.contains(key)) throw SchemaError(std::string("problem: missing '") + key + "'");
  }
  if (!j["n"].is_number_integer() || !j["m"].is_number_integer()) {
    throw SchemaError("problem: n and m must be integers");
  }
  ProblemSpec spec;
  spec.n = j["n"].get<int>();
  spec.m = j["m"].get<int>();
  if (spec.n < 3 || spec.n > 6) throw SchemaError("problem: n must lie in 3..6");
  spec.target_dim = spec.n;
  if (j.contains("target_dim")) {
    if (!j["target_dim"].is_number_integer()) throw SchemaError("problem: target_dim must be an integer");
    spec.target_dim = j["target_dim"].get<int>();
  }
  if (spec.target_dim < 1) throw SchemaError("problem: target_dim must be >= 1");
  if (!j["phi"].is_array()) throw SchemaError("problem: phi must be an array");
  for (std::size_t k = 0; k < j["phi"].size(); ++k) {
    spec.phi.push_back(read_datum(j["phi"][k], spec.n, spec.target_dim, "phi[" + std::to_string(k) + "]"));
  }
  spec.budget = default_solver_budget(spec.n);
  if (j.contains("budget")) {
    const json& b = j["budget"];
    reject_unknown(b, {"sphere_level", "radial", "grid_level", "grid_radial", "row_level", "row_radial", "poisson_level"},
                   "budget");
    auto read = [&](const char* key, int& slot) {
      if (!b.contains(key)) return;
      if (!b[key].is_number_integer()) throw SchemaError(std::string("budget.") + key + ": expected an integer");
      slot = b[key].get<int>();
    };
    read("sphere_level", spec.budget.sphere_level);
    read("radial", spec.budget.radial);
    read("grid_level", spec.budget.grid_level);
    read("grid_radial", spec.budget.grid_radial);
    read("row_level", spec.budget.row_level);
    read("row_radial", spec.budget.row_radial);
    read("poisson_level", spec.budget.poisson_level);
  }
  spec.validate();
  return spec;
}

std::string problem_spec_to_json(const ProblemSpec& spec) {
  json j;
  j["n"] = spec.n;
  j["m"] = spec.m;
  j["target_dim"] = spec.target_dim;
  j["phi"] = json::array();
  for (const Datum& d : spec.phi) j["phi"].push_back(write_datum(d));
  const SolverBudget& b = spec.budget;
  j["budget"] = {{"sphere_level", b.sphere_level}, {"radial", b.radial},         {"grid_level", b.grid_level},
                 {"grid_radial", b.grid_radial},   {"row_level", b.row_level},   {"row_radial", b.row_radial},
                 {"poisson_level", b.poisson_level}};
  return j.dump();
}

}  // namespace polypotential
