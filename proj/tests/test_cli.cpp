#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "polypotential_cli_test";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

int run(const std::string& args) {
  const std::string cmd = std::string(POLYPOTENTIAL_CLI) + " " + args + " 2>" + path("stderr.txt");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const std::string& name, const std::string& text) { std::ofstream(path(name)) << text; }

std::string read(const std::string& name) {
  std::ifstream in(path(name));
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("identities command") {
  CHECK(run("identities --n 3 --out " + path("id.json")) == 0);
  const auto j = nlohmann::json::parse(read("id.json"));
  CHECK(j["schema_version"] == 1);
  CHECK(j["seed"] == 1);
  CHECK(j["all_pass"] == true);
  CHECK(j["rows"].size() == 7);
  CHECK(run("identities --n 3,x") == 2);
  CHECK(run("identities --n 7") == 2);
  CHECK(run("identities --n 3 --samples 2 --tolerance 1e-17 --budget 4 4 --out " + path("fail.csv")) == 1);
  CHECK(read("fail.csv").find(",false,") != std::string::npos);
  CHECK(run("identities --format xml") == 2);
  CHECK(run("") == 2);
}

TEST_CASE("solve command") {
  write("o2.json",
        R"({"n":3,"m":2,"target_dim":1,"phi":[{"preset":"zero"},{"preset":"const","value":[-6]},{"preset":"zero"}]})");
  write("zero.json",
        R"({"n":3,"m":2,"target_dim":2,"phi":[{"preset":"zero"},{"preset":"zero"},{"preset":"zero"}]})");
  write("o3.json", R"({"n":3,"m":3,"target_dim":1,"phi":[{"preset":"zero"},{"preset":"const","value":[-20]},
                       {"preset":"const","value":[-120]},{"preset":"zero"}]})");
  write("pts.csv", "x,y,z\n0,0,0\n0.5,0,0\n0.1,-0.2,0.3\n0,0.9,0\n");
  CHECK(run("solve --spec " + path("o2.json") + " --points " + path("pts.csv") + " --out " + path("o2.csv")) == 0);
  std::istringstream lines(read("o2.csv"));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "schema_version,seed,index,x0,x1,x2,f0,error");
  std::getline(lines, line);
  const double f0 = std::stod(line.substr(line.rfind(',', line.rfind(',') - 1) + 1));
  CHECK(f0 == doctest::Approx(1.0).epsilon(1e-2));

  CHECK(run("solve --spec " + path("zero.json") + " --points " + path("pts.csv") + " --format json --out " +
            path("zero.out")) == 0);
  for (const auto& p : nlohmann::json::parse(read("zero.out"))["points"]) {
    CHECK(p["f"][0] == 0.0);
    CHECK(p["f"][1] == 0.0);
  }

  // m = 3 oracle: f = 1 - |x|^4
  CHECK(run("solve --spec " + path("o3.json") + " --points " + path("pts.csv") + " --format json --out " +
            path("o3.out")) == 0);
  for (const auto& p : nlohmann::json::parse(read("o3.out"))["points"]) {
    double t = 0;
    for (double c : p["x"]) t += c * c;
    CHECK(p["f"][0].get<double>() == doctest::Approx(1 - t * t).epsilon(1e-2));
  }

  CHECK(run("solve --spec " + path("o2.json") + " --points " + path("pts.csv") + " --tolerance 1e-30 --out " +
            path("none.csv")) == 3);
  CHECK_FALSE(fs::exists(path("none.csv")));
  write("bad.json", R"({"n":3,"m":2})");
  CHECK(run("solve --spec " + path("bad.json") + " --points " + path("pts.csv")) == 2);
  write("pts2.csv", "0,0\n");
  CHECK(run("solve --spec " + path("o2.json") + " --points " + path("pts2.csv")) == 2);
  CHECK(run("solve --points " + path("pts.csv")) == 2);
}

TEST_CASE("constants command") {
  write("norms.json", "[[], [0.1, 0.2]]");
  CHECK(run("constants --n 3..4 --K 1.0..2.0:0.1 --norms " + path("norms.json") + " --out " + path("c.csv")) == 0);
  std::istringstream lines(read("c.csv"));
  std::string line;
  int rows = 0;
  std::getline(lines, line);
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 2 * 11 * 2);
  CHECK(run("constants --n 3 --K 1 --q 1 --format json --out " + path("c.json")) == 0);
  const auto c = nlohmann::json::parse(read("c.json"))["cells"][0];
  CHECK(c["M1"] == 1.0);
  CHECK(c["N1"] == 0.0);
  CHECK(c["L"].get<double>() == doctest::Approx(0.4142).epsilon(1e-4));
  // an invalid cell is flagged, the run continues
  CHECK(run("constants --n 3 --K 0.5,1.5 --format json --out " + path("c2.json")) == 0);
  const auto cells = nlohmann::json::parse(read("c2.json"))["cells"];
  CHECK(cells[0]["status"] != "ok");
  CHECK(cells[1]["status"] == "ok");
  CHECK(run("constants --K 1.0..2.0") == 2);
  write("badnorms.json", R"({"a":1})");
  CHECK(run("constants --norms " + path("badnorms.json")) == 2);
}

TEST_CASE("verify command and run configurations") {
  write("g.json", R"({"n":3,"m":2,"target_dim":1,"phi":[{"preset":"coordinate","index":0},
                      {"preset":"const","value":[1]},{"preset":"zero"}]})");
  CHECK(run("verify --spec " + path("g.json") + " --samples 5 --out " + path("v.json")) == 0);
  const auto v = nlohmann::json::parse(read("v.json"));
  CHECK(v["violations"] == 0);
  CHECK(v["reports"].size() == 4);

  write("cfg.json", R"({"seed": 9, "n": "3", "samples": 2})");
  CHECK(run("identities --config " + path("cfg.json") + " --out " + path("cfg.json.out")) == 0);
  CHECK(nlohmann::json::parse(read("cfg.json.out"))["seed"] == 9);
  CHECK(run("identities --config " + path("cfg.json") + " --seed 4 --out " + path("cfg4.out")) == 0);
  CHECK(nlohmann::json::parse(read("cfg4.out"))["seed"] == 4);
  write("cfg_bad.json", R"({"seed": 9, "colour": "red"})");
  CHECK(run("identities --config " + path("cfg_bad.json")) == 2);
}
