#include "polypotential/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace polypotential {

using nlohmann::ordered_json;

namespace {

ordered_json header(std::uint64_t seed) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["seed"] = seed;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// CSV field for a list of numbers: space separated, no quoting needed.
std::string joined(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += format_double(v[i]);
  }
  return s;
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const char* flag(bool b) { return b ? "true" : "false"; }

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string identities_json(const std::vector<IdentityRow>& rows, std::uint64_t seed) {
  ordered_json j = header(seed);
  j["command"] = "identities";
  bool all = true;
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    all = all && r.pass;
    arr.push_back({{"identity", r.identity},
                   {"n", r.n},
                   {"samples", r.samples},
                   {"closed_form", r.closed_form},
                   {"quadrature", r.quadrature},
                   {"rel_error", r.rel_error},
                   {"tolerance", r.tolerance},
                   {"pass", r.pass},
                   {"worst_point", r.worst_point}});
  }
  j["all_pass"] = all;
  j["rows"] = std::move(arr);
  return dump(j);
}

std::string identities_csv(const std::vector<IdentityRow>& rows, std::uint64_t seed) {
  std::ostringstream os;
  os << "schema_version,seed,identity,n,samples,closed_form,quadrature,rel_error,tolerance,pass,worst_point\n";
  for (const auto& r : rows) {
    os << kSchemaVersion << ',' << seed << ',' << r.identity << ',' << r.n << ',' << r.samples << ','
       << format_double(r.closed_form) << ',' << format_double(r.quadrature) << ',' << format_double(r.rel_error)
       << ',' << format_double(r.tolerance) << ',' << flag(r.pass) << ',' << joined(r.worst_point) << '\n';
  }
  return os.str();
}

std::string bounds_json(const std::vector<BoundsReport>& reports, std::uint64_t seed) {
  ordered_json j = header(seed);
  j["command"] = "verify";
  std::size_t violations = 0;
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) {
    violations += r.violations();
    ordered_json entries = ordered_json::array();
    for (const auto& e : r.entries) {
      entries.push_back({{"label", e.label},
                         {"point", e.point},
                         {"value", e.value},
                         {"bound", e.bound},
                         {"relation", e.relation},
                         {"error_bar", e.error_bar},
                         {"tolerance", e.tolerance},
                         {"violation", e.violation},
                         {"pass", e.pass},
                         {"note", e.note}});
    }
    arr.push_back({{"name", r.name}, {"violations", r.violations()}, {"notes", r.notes}, {"entries", entries}});
  }
  j["violations"] = violations;
  j["reports"] = std::move(arr);
  return dump(j);
}

std::string bounds_csv(const std::vector<BoundsReport>& reports, std::uint64_t seed) {
  std::ostringstream os;
  os << "schema_version,seed,report,index,label,relation,value,bound,error_bar,violation,pass,point\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
      const auto& e = r.entries[i];
      os << kSchemaVersion << ',' << seed << ',' << quoted(r.name) << ',' << i << ',' << quoted(e.label) << ','
         << e.relation << ',' << format_double(e.value) << ',' << format_double(e.bound) << ','
         << format_double(e.error_bar) << ',' << format_double(e.violation) << ',' << flag(e.pass) << ','
         << joined(e.point) << '\n';
    }
  }
  return os.str();
}

std::string constants_json(const std::vector<ConstantsCell>& cells, std::uint64_t seed) {
  ordered_json j = header(seed);
  j["command"] = "constants";
  ordered_json arr = ordered_json::array();
  for (const auto& c : cells) {
    ordered_json row = {{"n", c.n},     {"K", c.K},         {"norm_set", c.norm_set}, {"norms", c.norms},
                        {"L", c.heinz}, {"c0", c.c0},       {"delta", c.delta},       {"status", c.status}};
    if (c.constants) {
      const ConstantsReport& r = *c.constants;
      row["q"] = r.q;
      row["q_default"] = r.q_default;
      row["alpha"] = r.alpha;
      row["beta"] = r.beta;
      row["mu1"] = r.mu1;
      row["mu2"] = r.mu2;
      row["mu3"] = r.mu3;
      row["mu4"] = r.mu4;
      row["mu5"] = opt_json(r.mu5);
      row["c3"] = r.c3;
      row["c3_branch"] = r.c3_branch;
      row["m1_star"] = r.m1_star;
      row["m2_star"] = r.m2_star;
      row["m1_prime"] = r.m1_prime;
      row["n1_prime"] = r.n1_prime;
      row["m1_second"] = opt_json(r.m1_second);
      row["n1_second"] = opt_json(r.n1_second);
      row["M1"] = r.M1;
      row["N1"] = r.N1;
      row["branch"] = r.branch;
      row["lipschitz_bound"] = r.lipschitz_bound();
    }
    arr.push_back(std::move(row));
  }
  j["cells"] = std::move(arr);
  return dump(j);
}

std::string constants_csv(const std::vector<ConstantsCell>& cells, std::uint64_t seed) {
  std::ostringstream os;
  os << "schema_version,seed,n,K,norm_set,norms,L,c0,delta,q,q_default,alpha,beta,mu1,mu2,mu3,mu4,mu5,c3,"
        "c3_branch,M1,N1,branch,lipschitz_bound,status\n";
  for (const auto& c : cells) {
    os << kSchemaVersion << ',' << seed << ',' << c.n << ',' << format_double(c.K) << ',' << c.norm_set << ','
       << joined(c.norms) << ',' << format_double(c.heinz) << ',' << format_double(c.c0) << ','
       << format_double(c.delta) << ',';
    if (c.constants) {
      const ConstantsReport& r = *c.constants;
      os << format_double(r.q) << ',' << flag(r.q_default) << ',' << format_double(r.alpha) << ','
         << format_double(r.beta) << ',' << format_double(r.mu1) << ',' << format_double(r.mu2) << ','
         << format_double(r.mu3) << ',' << format_double(r.mu4) << ',' << opt(r.mu5) << ',' << format_double(r.c3)
         << ',' << r.c3_branch << ',' << format_double(r.M1) << ',' << format_double(r.N1) << ',' << r.branch << ','
         << format_double(r.lipschitz_bound()) << ',';
    } else {
      os << ",,,,,,,,,,,,,,,";
    }
    os << quoted(c.status) << '\n';
  }
  return os.str();
}

std::string solve_csv(const std::vector<SolvedPoint>& rows, std::uint64_t seed) {
  std::ostringstream os;
  const Eigen::Index n = rows.empty() ? 0 : rows.front().x.size();
  const Eigen::Index d = rows.empty() ? 0 : rows.front().value.size();
  os << "schema_version,seed,index";
  for (Eigen::Index i = 0; i < n; ++i) os << ",x" << i;
  for (Eigen::Index i = 0; i < d; ++i) os << ",f" << i;
  os << ",error\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << kSchemaVersion << ',' << seed << ',' << r;
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_double(rows[r].x(i));
    for (Eigen::Index i = 0; i < d; ++i) os << ',' << format_double(rows[r].value(i));
    os << ',' << format_double(rows[r].error) << '\n';
  }
  return os.str();
}

std::string solve_json(const std::vector<SolvedPoint>& rows, std::uint64_t seed) {
  ordered_json j = header(seed);
  j["command"] = "solve";
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"x", std::vector<double>(r.x.data(), r.x.data() + r.x.size())},
                   {"f", std::vector<double>(r.value.data(), r.value.data() + r.value.size())},
                   {"error", r.error}});
  }
  j["points"] = std::move(arr);
  return dump(j);
}

}  // namespace polypotential
