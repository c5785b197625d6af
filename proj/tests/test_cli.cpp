#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
  const char* p = std::getenv("ORDSTAT_CLI_BIN");
  REQUIRE_MESSAGE(p != nullptr, "ORDSTAT_CLI_BIN must point at the CLI binary");
  return p;
}

struct RunResult {
  int code = -1;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  fs::create_directories("cli_tmp");
  const fs::path outfile = "cli_tmp/out" + std::to_string(counter++) + ".txt";
  const std::string cmd = env_prefix + "\"" + cli_path() + "\" " + args + " > " +
                          outfile.string() + " 2> cli_tmp/stderr.txt";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(outfile);
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("cli sweep for n = 1 matches the unsorted problem") {
  const auto r = run_cli("sweep --n 1 --sigma 1 --outer 8000 --seed 3 --chunks 4");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "sigma");
  CHECK(rows[0][1] == "mse_optimal");
  CHECK(rows[0][10] == "mmse_unsorted");

  const double mse = std::stod(rows[1][1]);
  const double se = std::stod(rows[1][2]);
  const double unsorted = std::stod(rows[1][10]);
  CHECK(unsorted == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(mse - 0.5) <= 4.0 * se);

  // identical rerun is byte-identical
  const auto again = run_cli("sweep --n 1 --sigma 1 --outer 8000 --seed 3 --chunks 4");
  CHECK(again.out == r.out);
}

TEST_CASE("cli sweep output does not depend on ORDSTAT_THREADS") {
  const std::string args = "sweep --n 3 --sigma 0.5,1 --outer 1500 --inner 256 --seed 11";
  const auto one = run_cli(args, "ORDSTAT_THREADS=1 ");
  const auto three = run_cli(args, "ORDSTAT_THREADS=3 ");
  REQUIRE(one.code == 0);
  REQUIRE(three.code == 0);
  CHECK(one.out == three.out);
  CHECK(one.out.find("sigma,") == 0);
}

TEST_CASE("cli sweep default estimator set caps the MLE range") {
  const auto r = run_cli("sweep --n 2 --sigma 1,5 --outer 1200 --seed 5");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(!rows[1][7].empty());  // mse_mle at sigma = 1
  CHECK(rows[2][7].empty());   // absent at sigma = 5
  CHECK(!rows[2][1].empty());

  // explicit estimator list disables the cap
  const auto full = run_cli("sweep --n 2 --sigma 5 --outer 600 --seed 5 --estimators mle");
  REQUIRE(full.code == 0);
  const auto frows = parse_csv(full.out);
  CHECK(!frows[1][7].empty());
  CHECK(frows[1][1].empty());
}

TEST_CASE("cli csv cells carry at least nine significant digits") {
  const auto r = run_cli("varratio --nmax 3");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][2] == "1");
  CHECK(std::stod(rows[2][1]) == doctest::Approx(1.363380227632).epsilon(1e-11));
  // 12 significant digits in the text itself
  CHECK(rows[2][1].size() >= 13);
  double prev = 2.0;
  for (size_t i = 1; i < rows.size(); ++i) {
    const double ratio = std::stod(rows[i][2]);
    CHECK(ratio < prev + 1e-15);
    prev = ratio;
  }
}

TEST_CASE("cli delta table") {
  const auto r = run_cli("delta --n 4 --sigma 1 --outer 600 --inner 128 --seed 2");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"sigma", "delta_up", "se", "asymptote"});
  CHECK(std::stod(rows[1][3]) == doctest::Approx(23.0 / 6.0).epsilon(1e-9));
  CHECK(std::stod(rows[1][1]) > 0.0);
}

TEST_CASE("cli bounds table honours the documented inequalities") {
  const auto r = run_cli("bounds --nmax 6 --eps 0,4");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 7);
  REQUIRE(rows[0].size() == 9);
  CHECK(rows[0][7] == "powsum_bound_eps0");
  CHECK(rows[0][8] == "powsum_bound_eps4");
  for (size_t i = 1; i < rows.size(); ++i) {
    const double vs = std::stod(rows[i][1]);
    const double chi = std::stod(rows[i][4]);
    const double meb = std::stod(rows[i][5]);
    CHECK(vs >= chi);
    CHECK(vs >= meb - 1e-12);
  }
  CHECK(rows[1][3].empty());  // var_approx_error_bound undefined at n = 1
}

TEST_CASE("cli regularity report") {
  const auto r = run_cli("regularity --outer 60000 --seed 4");
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(r.out);
  CHECK(report.at("command") == "regularity");
  CHECK(report.at("results").at("regularity_violated") == true);
  const auto comps = report.at("results").at("components");
  CHECK(std::abs(comps[0].get<double>() + comps[1].get<double>()) < 0.05);
  CHECK(report.at("manifest").at("library_version") == "0.1.0");

  const auto q = run_cli("regularity --quadrature");
  REQUIRE(q.code == 0);
  const auto qreport = nlohmann::json::parse(q.out);
  const auto qcomps = qreport.at("results").at("components");
  CHECK(std::abs(qcomps[0].get<double>() - comps[0].get<double>()) < 1e-2);
  CHECK(qreport.at("results").at("regularity_violated") == true);
}

TEST_CASE("cli manifest and replay") {
  fs::create_directories("cli_tmp");
  const auto r = run_cli(
      "sweep --n 2 --sigma 0.5,1 --outer 2000 --seed 8 "
      "--out cli_tmp/sweep_a.csv --manifest cli_tmp/sweep_a.json");
  REQUIRE(r.code == 0);
  REQUIRE(fs::exists("cli_tmp/sweep_a.csv"));
  REQUIRE(fs::exists("cli_tmp/sweep_a.json"));

  const auto manifest = nlohmann::json::parse(slurp("cli_tmp/sweep_a.json"));
  CHECK(manifest.at("command") == "sweep");
  CHECK(manifest.at("seed") == 8);
  CHECK(manifest.at("config").at("outer") == 2000);
  CHECK(manifest.at("library_version") == "0.1.0");
  CHECK(manifest.at("duration_seconds").get<double>() >= 0.0);

  const auto replay =
      run_cli("replay --manifest-in cli_tmp/sweep_a.json --out cli_tmp/sweep_b.csv");
  REQUIRE(replay.code == 0);
  CHECK(slurp("cli_tmp/sweep_a.csv") == slurp("cli_tmp/sweep_b.csv"));

  // default manifest path sits next to the output file
  const auto r2 = run_cli("varratio --nmax 2 --out cli_tmp/vr.csv");
  REQUIRE(r2.code == 0);
  CHECK(fs::exists("cli_tmp/vr.csv.manifest.json"));
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli("sweep --badflag").code == 2);
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("sweep --n 2 --sigma banana").code == 2);
  CHECK(run_cli("sweep --n 2 --estimators turnip --sigma 1 --outer 10").code == 2);
  // numeric failure: delta_up is undefined at sigma = 0
  CHECK(run_cli("delta --n 2 --sigma 0 --outer 10").code == 1);
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("sweep --help").code == 0);
}
