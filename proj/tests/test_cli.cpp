#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"

#include "cli.hpp"
#include "pbphase/serialize.hpp"

namespace fs = std::filesystem;
using pbphase::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = pbphase::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> data_rows(const std::string& csv) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  const auto d = fs::temp_directory_path() / "pbphase_cli_test";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("wigner-grid") {
  const auto r = run({"wigner-grid", "--s", "4", "--m", "0", "--extent", "5", "--n", "201"});
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  CHECK(rows.size() == 201u * 201u);
  CHECK(rows.front()[0] == -5.0);
  CHECK(rows.back()[1] == 5.0);
  CHECK(r.out.find("q,p,W\n") != std::string::npos);
  CHECK(r.out.find("# s = 4\n") != std::string::npos);

  CHECK(run({"wigner-grid", "--s", "0"}).code == 1);
  CHECK(run({"wigner-grid", "--s", "3", "--m", "5"}).code == 1);
  CHECK(run({"wigner-grid", "--bogus"}).code == 1);
  CHECK(run({}).code == 1);
}

TEST_CASE("wigner-grid rotation between m = 0 and m = 3") {
  const auto a = data_rows(run({"wigner-grid", "--s", "11", "--m", "0", "--extent", "4", "--n", "41"}).out);
  const auto b = data_rows(run({"wigner-grid", "--s", "11", "--m", "3", "--extent", "4", "--n", "41"}).out);
  REQUIRE(a.size() == 41u * 41u);
  // b(q, p) = a(R(pi/2)(q, p)) = a(-p, q): indices (i, j) -> (40 - j, i)
  double worst = 0.0;
  for (int i = 0; i < 41; ++i)
    for (int j = 0; j < 41; ++j)
      worst = std::max(worst, std::abs(b[i * 41 + j][2] - a[(40 - j) * 41 + i][2]));
  CHECK(worst < 1e-6);
}

TEST_CASE("negativity-sweep") {
  const auto one = run({"negativity-sweep", "--s", "1"});
  REQUIRE(one.code == 0);
  CHECK(data_rows(one.out).size() == 1);

  const auto r = run({"negativity-sweep", "--s", "1-5", "--fock-reference"});
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  CHECK(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] > rows[i - 1][1]);
  CHECK(r.out.find("# strictly increasing in s: true") != std::string::npos);
  const auto pos = r.out.find("# reference |1>: ");
  REQUIRE(pos != std::string::npos);
  const double ref = std::stod(r.out.substr(pos + 17));
  CHECK(std::abs(ref - 0.2131) < 1e-4);
}

TEST_CASE("radius-sweep") {
  const auto r = run({"radius-sweep", "--s", "2-4", "--vacuum-reference", "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["rows"].size() == 3);
  CHECK(j["summary"] == "strictly increasing in s: true");
  CHECK(run({"radius-sweep", "--s", "4-2"}).code == 1);
}

TEST_CASE("herald-sweep") {
  const auto empty = run({"herald-sweep", "--r-steps", "0"});
  REQUIRE(empty.code == 0);
  CHECK(data_rows(empty.out).empty());
  CHECK(empty.out.find("s,r,eta,P,F,V,leakage\n") != std::string::npos);

  const auto r = run({"herald-sweep", "--s", "2", "--eta", "1", "--r-min", "0.001", "--r-max", "0.01",
                      "--r-steps", "4", "--skip-v"});
  REQUIRE(r.code == 0);
  CHECK(data_rows(r.out).size() == 4);
  const auto pos = r.out.find("s=2 eta=1: ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::abs(std::stod(r.out.substr(pos + 11)) - 4.0) < 0.01);

  CHECK(run({"herald-sweep", "--eta", "1.5"}).code == 1);
  CHECK(run({"herald-sweep", "--eta", "x"}).code == 1);
}

TEST_CASE("phase-sim") {
  const auto ex = run({"phase-sim", "--mode", "exact", "--target", "coefficients", "--s", "1", "--coef-r", "0.6",
                       "--coef-theta", "1.2"});
  REQUIRE(ex.code == 0);
  const json e = json::parse(ex.out);
  const auto c = e["estimate"]["coefficients"];
  CHECK(std::abs(c[0][0].get<double>() - 0.6) < 1e-6);
  CHECK(std::abs(std::atan2(c[1][1].get<double>(), c[1][0].get<double>()) - 1.2) < 1e-6);

  const auto one = run({"phase-sim", "--trials", "1", "--seed", "3"});
  REQUIRE(one.code == 0);
  const json o = json::parse(one.out);
  CHECK(o["estimate"]["stderr"].get<double>() >= 1.0);

  const auto mc = run({"phase-sim", "--s", "4", "--delta", "0.7", "--trials", "100000", "--seed", "11"});
  REQUIRE(mc.code == 0);
  CHECK(json::parse(mc.out)["abs_error"].get<double>() < 0.05);

  CHECK(run({"phase-sim", "--mode", "guess"}).code == 1);
  CHECK(run({"phase-sim", "--format", "csv"}).code == 1);
}

TEST_CASE("config precedence and echo") {
  const auto dir = scratch_dir();
  const auto cfg = dir / "grid.conf";
  std::ofstream(cfg) << "# grid settings\ns = 2\nn = 3\nextent=1.5\n";
  const auto r = run({"wigner-grid", "--config", cfg.string(), "--n", "5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# s = 2\n") != std::string::npos);
  CHECK(r.out.find("# n = 5\n") != std::string::npos);
  CHECK(r.out.find("# extent = 1.5\n") != std::string::npos);
  CHECK(data_rows(r.out).size() == 25);

  std::ofstream(dir / "bad.conf") << "colour = blue\n";
  CHECK(run({"wigner-grid", "--config", (dir / "bad.conf").string()}).code == 1);
  std::ofstream(dir / "garbled.conf") << "just words\n";
  CHECK(run({"wigner-grid", "--config", (dir / "garbled.conf").string()}).code == 1);
  CHECK(run({"wigner-grid", "--config", (dir / "absent.conf").string()}).code == 3);
}

TEST_CASE("output files and exit codes") {
  const auto dir = scratch_dir();
  CHECK(run({"wigner-grid", "--s", "2", "--n", "3", "--out", (dir / "no" / "such" / "x.csv").string()}).code == 3);
  const auto out = dir / "grid.csv";
  REQUIRE(run({"wigner-grid", "--s", "2", "--n", "3", "--out", out.string()}).code == 0);
  CHECK(slurp(out).rfind("# pbphase wigner-grid\n", 0) == 0);
}

TEST_CASE("installed binary honours the exit-code contract") {
  const char* tool = std::getenv("PBPHASE_TOOL");
  if (!tool) return;
  const std::string cmd = std::string(tool) + " wigner-grid --s 0 > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 1);
  const std::string ok = std::string(tool) + " wigner-grid --s 1 --n 2 > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(ok.c_str())) == 0);
}
