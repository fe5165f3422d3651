// polypotential: identity suites, solves, constant tables and bound sweeps.
//
// Exit codes: 0 all pass, 1 inequality or identity violation, 2 usage or
// schema error, 3 resource or budget exhaustion.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "polypotential/errors.hpp"
#include "polypotential/identities.hpp"
#include "polypotential/inequality_lab.hpp"
#include "polypotential/parallel.hpp"
#include "polypotential/report.hpp"
#include "polypotential/solver.hpp"
#include "polypotential/specfun.hpp"

namespace pp = polypotential;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kViolation = 1, kUsage = 2, kResource = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string input;   // problem JSON (solve, verify)
  std::string points;  // point list (solve)
  std::string norms;   // norm sets (constants)
  std::string output;
  std::string format;  // json | csv; empty: from the output extension
  std::uint64_t seed = 1;
  std::optional<double> tolerance;
  std::vector<int> budget;  // {sphere_level, radial}
  std::string n = "3";
  std::string K = "1.0";
  std::optional<double> q;
  int samples = 0;  // 0: command default
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Fills config fields from a JSON file; command-line flags given explicitly win.
void load_config(const std::string& path, RunConfig& cfg, const CLI::App& app) {
  json j;
  try {
    j = json::parse(slurp(path));
  } catch (const json::exception& e) {
    throw pp::SchemaError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw pp::SchemaError("config: expected an object");
  auto given = [&](const char* flag) { return app.count(flag) > 0; };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") {
        if (v.get<std::string>() != cfg.command) throw pp::SchemaError("config: command does not match");
      } else if (key == "input") {
        if (!given("--spec")) cfg.input = v.get<std::string>();
      } else if (key == "points") {
        if (!given("--points")) cfg.points = v.get<std::string>();
      } else if (key == "norms") {
        if (!given("--norms")) cfg.norms = v.get<std::string>();
      } else if (key == "output") {
        if (!given("--out")) cfg.output = v.get<std::string>();
      } else if (key == "format") {
        if (!given("--format")) cfg.format = v.get<std::string>();
      } else if (key == "seed") {
        if (!given("--seed")) cfg.seed = v.get<std::uint64_t>();
      } else if (key == "tolerance") {
        if (!given("--tolerance")) cfg.tolerance = v.get<double>();
      } else if (key == "budget") {
        if (!given("--budget")) cfg.budget = v.get<std::vector<int>>();
      } else if (key == "n") {
        if (!given("--n")) cfg.n = v.is_string() ? v.get<std::string>() : std::to_string(v.get<int>());
      } else if (key == "K") {
        if (!given("--K")) cfg.K = v.is_string() ? v.get<std::string>() : pp::format_double(v.get<double>());
      } else if (key == "q") {
        if (!given("--q")) cfg.q = v.get<double>();
      } else if (key == "samples") {
        if (!given("--samples")) cfg.samples = v.get<int>();
      } else {
        throw pp::SchemaError("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw pp::SchemaError(std::string("config: ") + e.what());
  }
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw UsageError("not a number: '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  const double v = parse_number(s);
  if (v != std::floor(v) || std::abs(v) > 1e6) throw UsageError("not an integer: '" + s + "'");
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

// "3", "3,4" or "3..5".
std::vector<int> parse_n_list(const std::string& s) {
  std::vector<int> out;
  const auto dots = s.find("..");
  if (dots != std::string::npos) {
    const int a = parse_int(s.substr(0, dots)), b = parse_int(s.substr(dots + 2));
    if (b < a) throw UsageError("empty range '" + s + "'");
    for (int n = a; n <= b; ++n) out.push_back(n);
  } else {
    for (const auto& part : split(s, ',')) out.push_back(parse_int(part));
  }
  if (out.empty()) throw UsageError("empty dimension list");
  return out;
}

// "1.5", "1.0,1.5" or "1.0..2.0:0.1" (inclusive; grid points a + i step).
std::vector<double> parse_K_list(const std::string& s) {
  std::vector<double> out;
  const auto dots = s.find("..");
  if (dots != std::string::npos) {
    const auto colon = s.find(':', dots);
    if (colon == std::string::npos) throw UsageError("range '" + s + "' needs a step, as in 1.0..2.0:0.1");
    const double a = parse_number(s.substr(0, dots));
    const double b = parse_number(s.substr(dots + 2, colon - dots - 2));
    const double step = parse_number(s.substr(colon + 1));
    if (!(step > 0.0) || b < a) throw UsageError("bad range '" + s + "'");
    const long count = std::lround(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 100000) throw UsageError("range '" + s + "' is too long");
    for (long i = 0; i < count; ++i) out.push_back(a + i * step);
  } else {
    for (const auto& part : split(s, ',')) out.push_back(parse_number(part));
  }
  if (out.empty()) throw UsageError("empty K list");
  return out;
}

std::vector<std::vector<double>> read_norm_sets(const std::string& path) {
  if (path.empty()) return {{}};
  json j;
  try {
    j = json::parse(slurp(path));
    if (!j.is_array()) throw pp::SchemaError("norms: expected an array of arrays");
    std::vector<std::vector<double>> sets;
    for (const auto& set : j) {
      if (!set.is_array()) throw pp::SchemaError("norms: expected an array of arrays");
      sets.push_back(set.get<std::vector<double>>());
    }
    if (sets.empty()) throw pp::SchemaError("norms: no norm sets");
    return sets;
  } catch (const json::exception& e) {
    throw pp::SchemaError(std::string("norms: ") + e.what());
  }
}

// One point per line, comma separated; a non-numeric first line is a header.
std::vector<pp::Point> read_points(const std::string& path, int n) {
  std::istringstream in(slurp(path));
  std::vector<pp::Point> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split(line, ',');
    std::vector<double> v;
    try {
      for (const auto& f : fields) {
        const auto b = f.find_first_not_of(" \t"), e = f.find_last_not_of(" \t");
        v.push_back(parse_number(b == std::string::npos ? "" : f.substr(b, e - b + 1)));
      }
    } catch (const UsageError&) {
      if (lineno == 1 && pts.empty()) continue;
      throw pp::SchemaError("points: line " + std::to_string(lineno) + " is not numeric");
    }
    if (static_cast<int>(v.size()) != n) {
      throw pp::SchemaError("points: line " + std::to_string(lineno) + " has " + std::to_string(v.size()) +
                            " coordinates, expected " + std::to_string(n));
    }
    pts.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), n));
  }
  return pts;
}

bool use_csv(const RunConfig& cfg) {
  if (!cfg.format.empty()) {
    if (cfg.format != "json" && cfg.format != "csv") throw UsageError("format must be json or csv");
    return cfg.format == "csv";
  }
  const auto& o = cfg.output;
  return o.size() >= 4 && o.compare(o.size() - 4, 4, ".csv") == 0;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw pp::ResourceError("cannot write " + cfg.output);
  out << text;
  if (!out) throw pp::ResourceError("write to " + cfg.output + " failed");
}

std::optional<pp::GreenBudget> budget_of(const RunConfig& cfg) {
  if (cfg.budget.empty()) return std::nullopt;
  if (cfg.budget.size() != 2 || cfg.budget[0] < 2 || cfg.budget[1] < 2) {
    throw UsageError("budget takes two integers >= 2: sphere_level radial");
  }
  return pp::GreenBudget{cfg.budget[0], cfg.budget[1]};
}

pp::ProblemSpec read_spec(const RunConfig& cfg) {
  if (cfg.input.empty()) throw UsageError("--spec is required");
  return pp::problem_spec_from_json(slurp(cfg.input));
}

std::vector<pp::Point> ball_samples(std::mt19937_64& rng, int n, int count, double rmax, bool sphere) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<pp::Point> out;
  for (int i = 0; i < count; ++i) {
    pp::Point p(n);
    for (int c = 0; c < n; ++c) p(c) = g(rng);
    p.normalize();
    out.push_back(sphere ? p : pp::Point(rmax * std::pow(u(rng), 1.0 / n) * p));
  }
  return out;
}

int cmd_identities(const RunConfig& cfg) {
  std::vector<pp::IdentityRow> rows;
  const std::vector<int> ns = parse_n_list(cfg.n);
  for (int n : ns)
    if (n < 3 || n > 5) throw UsageError("identities: n must lie in {3, 4, 5}");
  pp::IdentityOptions opt;
  opt.seed = cfg.seed;
  if (cfg.samples > 0) opt.samples = cfg.samples;
  opt.tolerance = cfg.tolerance;
  opt.budget = budget_of(cfg);
  for (int n : ns) {
    auto r = pp::identity_suite(n, opt);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  emit(cfg, use_csv(cfg) ? pp::identities_csv(rows, cfg.seed) : pp::identities_json(rows, cfg.seed));
  bool all = true;
  for (const auto& r : rows) {
    if (!r.pass) {
      std::cerr << "identity " << r.identity << " failed at n = " << r.n << ": rel. error " << r.rel_error
                << " > " << r.tolerance << "\n";
      all = false;
    }
  }
  return all ? kPass : kViolation;
}

int cmd_solve(const RunConfig& cfg) {
  const pp::ProblemSpec spec = read_spec(cfg);
  if (cfg.points.empty()) throw UsageError("--points is required");
  const std::vector<pp::Point> pts = read_points(cfg.points, spec.n);
  const bool csv = use_csv(cfg);
  const pp::Solver solver(spec);
  const pp::GreenBudget fb = budget_of(cfg).value_or(spec.budget.final_budget());
  std::vector<pp::SolvedPoint> rows(pts.size());
  pp::parallel_for(pts.size(), [&](std::size_t i) {
    const pp::VectorEstimate v = solver.solve(pts[i], fb);
    rows[i] = {pts[i], v.value, v.error};
  });
  if (cfg.tolerance) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!(rows[i].error <= *cfg.tolerance)) {
        throw pp::BudgetExhausted("solve: error bar " + pp::format_double(rows[i].error) + " at point " +
                                  std::to_string(i) + " exceeds the tolerance at this budget");
      }
    }
  }
  emit(cfg, csv ? pp::solve_csv(rows, cfg.seed) : pp::solve_json(rows, cfg.seed));
  return kPass;
}

int cmd_constants(const RunConfig& cfg) {
  const std::vector<int> ns = parse_n_list(cfg.n);
  for (int n : ns)
    if (n < 3) throw UsageError("constants: n must be >= 3");
  const std::vector<double> Ks = parse_K_list(cfg.K);
  const auto sets = read_norm_sets(cfg.norms);
  const bool csv = use_csv(cfg);
  std::vector<pp::ConstantsCell> cells;
  for (int n : ns) {
    for (double K : Ks) {
      for (std::size_t s = 0; s < sets.size(); ++s) {
        pp::ConstantsCell c;
        c.n = n;
        c.K = K;
        c.norm_set = static_cast<int>(s);
        c.norms = sets[s];
        c.heinz = pp::heinz_constant(n);
        c.c0 = pp::c0();
        c.delta = pp::delta_n(n);
        try {
          c.constants = pp::lipschitz_constants({n, K, cfg.q, sets[s]});
          if (!c.constants->mu5) c.status = "mu5_undefined";
        } catch (const pp::Error& e) {
          c.status = e.what();
        }
        cells.push_back(std::move(c));
      }
    }
  }
  emit(cfg, csv ? pp::constants_csv(cells, cfg.seed) : pp::constants_json(cells, cfg.seed));
  return kPass;
}

int cmd_verify(const RunConfig& cfg) {
  const pp::ProblemSpec spec = read_spec(cfg);
  const bool csv = use_csv(cfg);
  const pp::Solver solver(spec);
  const int n = spec.n;
  const int count = cfg.samples > 0 ? cfg.samples : 50;
  const pp::GreenBudget fb = budget_of(cfg).value_or(pp::GreenBudget{12, 24});
  std::mt19937_64 rng(cfg.seed);
  std::vector<pp::Point> interior = ball_samples(rng, n, count, 0.97, false);
  const std::vector<pp::Point> boundary = ball_samples(rng, n, std::max(1, count / 5), 1.0, true);

  std::vector<pp::BoundsReport> reports;
  std::vector<pp::Point> all = interior;
  all.insert(all.end(), boundary.begin(), boundary.end());
  reports.push_back(pp::schwarz_bound_check(solver, [&](const pp::Point& x) { return solver.solve(x, fb); }, all));
  reports.back().name = "schwarz";
  pp::GradientOptions gopt;
  gopt.budget = fb;
  for (int k = 1; k <= spec.m; ++k) reports.push_back(pp::gradient_bound_check(solver, k, all, gopt));

  // Laplacian bound at up to five samples of radius <= 0.8
  std::vector<pp::Point> inner;
  for (const auto& x : interior)
    if (x.norm() <= 0.8 && inner.size() < 5) inner.push_back(x);
  if (!inner.empty()) {
    const pp::ResidualReport rr =
        pp::residual_check(solver, [&](const pp::Point& x) { return solver.solve(x, fb); }, inner);
    pp::BoundsReport lap;
    lap.name = "laplacian";
    for (std::size_t i = 0; i < inner.size(); ++i) {
      pp::BoundsEntry e;
      e.label = "interior";
      e.point.assign(inner[i].data(), inner[i].data() + n);
      e.value = rr.laplacian_norm[i];
      e.bound = rr.laplacian_bound;
      e.error_bar = rr.residual[i];
      e.tolerance = 1e-9;
      lap.add(e);
    }
    reports.push_back(std::move(lap));
  }
  emit(cfg, csv ? pp::bounds_csv(reports, cfg.seed) : pp::bounds_json(reports, cfg.seed));
  std::size_t violations = 0;
  for (const auto& r : reports) violations += r.violations();
  if (violations) std::cerr << violations << " bound violation(s)\n";
  return violations ? kViolation : kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polyharmonic potentials on the unit ball: identities, solves, constants and bound checks."};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string config_path;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out,-o", cfg.output, "Output file (stdout when omitted)");
    sub->add_option("--format", cfg.format, "json or csv (default: from the --out extension, else json)")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", cfg.seed, "Seed recorded in the output and used for sampling");
    sub->add_option("--config", config_path, "JSON run configuration; explicit flags take precedence");
  };

  auto* ident = app.add_subcommand("identities", "Closed-form identities against quadrature");
  common(ident);
  ident->add_option("--n", cfg.n, "Dimensions, e.g. 3,4 or 3..5");
  ident->add_option("--samples", cfg.samples, "Random points per identity (default 20)");
  ident->add_option("--tolerance", cfg.tolerance, "Relative tolerance for the quadrature identities");
  ident->add_option("--budget", cfg.budget, "Green budget: sphere_level radial")->expected(2);

  auto* solve = app.add_subcommand("solve", "Evaluate the solution of a problem at given points");
  common(solve);
  solve->add_option("--spec", cfg.input, "Problem JSON");
  solve->add_option("--points", cfg.points, "CSV of points, one per line");
  solve->add_option("--tolerance", cfg.tolerance, "Largest accepted error bar (exit 3 beyond it)");
  solve->add_option("--budget", cfg.budget, "Final Green budget: sphere_level radial")->expected(2);

  auto* consts = app.add_subcommand("constants", "Tables of the Heinz and Lipschitz constants");
  common(consts);
  consts->add_option("--n", cfg.n, "Dimensions, e.g. 3..5");
  consts->add_option("--K", cfg.K, "Dilatations, e.g. 1.5, 1.0,2.0 or 1.0..2.0:0.1");
  consts->add_option("--norms", cfg.norms, "JSON array of norm sets [[|phi_1|, ..., |phi_m|], ...]");
  consts->add_option("--q", cfg.q, "Mori constant (default exp(K - 1))");

  auto* verify = app.add_subcommand("verify", "Schwarz, gradient and Laplacian bounds for a problem");
  common(verify);
  verify->add_option("--spec", cfg.input, "Problem JSON");
  verify->add_option("--samples", cfg.samples, "Interior samples (default 50); a fifth as many on the sphere");
  verify->add_option("--budget", cfg.budget, "Final Green budget: sphere_level radial")->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (!config_path.empty()) load_config(config_path, cfg, *sub);
    if (cfg.command == "identities") return cmd_identities(cfg);
    if (cfg.command == "solve") return cmd_solve(cfg);
    if (cfg.command == "constants") return cmd_constants(cfg);
    return cmd_verify(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const pp::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kUsage;
  } catch (const pp::BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kResource;
  } catch (const pp::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kResource;
  } catch (const pp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource error: out of memory\n";
    return kResource;
  }
}
