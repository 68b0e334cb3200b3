#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "wulff/cli.hpp"
#include "wulff/io.hpp"

using namespace wulff;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

cli::Options fresh(const std::string& name) {
  cli::Options o;
  o.out = fs::temp_directory_path() / ("wulff_test_cli_" + name);
  fs::remove_all(o.out);
  return o;
}

std::vector<std::vector<double>> read_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

int run_args(std::vector<std::string> args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("beta command") {
  const cli::Options o = fresh("beta");
  const json cfg = {{"N", 3}, {"p", 2.0}, {"q", 2.0}, {"lambda", 3.0 / 16.0}};
  CHECK(cli::cmd_beta(cfg, o) == cli::kPass);
  const json out = json::parse(read_text(o.out / "beta.json"));
  CHECK(out["beta"].get<double>() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("radial command with lambda = 0") {
  const cli::Options o = fresh("radial");
  const json cfg = {{"N", 3}, {"p", 2.0}, {"q", 1.8}, {"lambda", 0.0}};
  CHECK(cli::cmd_radial(cfg, o) == cli::kPass);
  const auto rows = read_csv(o.out / "radial.csv");
  REQUIRE(!rows.empty());
  for (const auto& r : rows) {
    REQUIRE(r.size() == 4);
    CHECK(r[1] == 0.0);
    CHECK(r[2] == 0.0);
    CHECK(r[3] == 0.0);
  }
  for (const auto& r : read_csv(o.out / "v_star.csv")) CHECK(r[1] == 0.0);
}

TEST_CASE("symmetrize command") {
  const cli::Options o = fresh("sym");
  const json cfg = {{"norm", {{"family", "ellipse"}, {"axes", {2.0, 1.0}}}}, {"samples", 64}};
  CHECK(cli::cmd_symmetrize(cfg, o) == cli::kPass);
  CHECK(fs::exists(o.out / "symmetrized.csv"));
  const auto prof = read_csv(o.out / "profile.csv");
  for (std::size_t i = 1; i < prof.size(); ++i) CHECK(prof[i][1] <= prof[i - 1][1]);
}

TEST_CASE("solve command and non-convergence exit code") {
  const cli::Options o = fresh("solve");
  json cfg = {{"N", 2}, {"p", 1.5}, {"q", 1.5}, {"lambda_fraction", 0.5}, {"h", 0.125}, {"epsilons", {0.1}}};
  CHECK(cli::cmd_solve(cfg, o) == cli::kPass);
  CHECK(fs::exists(o.out / "solution_eps0.csv"));
  cfg["solver"] = {{"max_iter", 1}};
  CHECK(cli::cmd_solve(cfg, fresh("solve_nc")) == cli::kNonConvergence);
}

TEST_CASE("verify command on the demo configuration") {
  const cli::Options o = fresh("verify");
  const json cfg = json::parse(read_text(WULFF_DEMO_CONFIG));
  CHECK(cli::cmd_verify(cfg, o) == cli::kPass);
  const json rep = json::parse(read_text(o.out / "report.json"));
  CHECK(rep["pass"].get<bool>());
  for (const auto& c : rep["checks"]) {
    CHECK(c.contains("check"));
    CHECK(c.contains("margin"));
    CHECK(c.contains("params"));
    CHECK(c.contains("artifacts"));
  }
  // v* lies above every u* on the plotted grid.
  const auto v = read_csv(o.out / "v_star.csv");
  const auto u = read_csv(o.out / "u_star_eps2.csv");
  REQUIRE(u.size() == v.size());
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(u[i][1] <= v[i][1] + rep["slack"].get<double>());
  CHECK(read_text(o.out / "overlay.svg").find("<svg") == 0);
}

TEST_CASE("configuration errors") {
  const cli::Options o = fresh("bad");
  CHECK_THROWS_AS(cli::cmd_beta(json{{"N", 2}, {"p", 2.0}, {"q", 2.0}, {"lambda", 0.1}}, o), Error);
  CHECK_THROWS_AS(cli::cmd_beta(json{{"N", 3}, {"p", 2.0}, {"q", 2.0}, {"lambda", 0.1}, {"lambda_fraction", 0.5}}, o),
                  Error);
  CHECK_THROWS_AS(norm_from_json(json{{"family", "hexagon"}}), Error);

  const fs::path bad = o.out / "broken.json";
  fs::create_directories(o.out);
  write_text(bad, "{ not json");
  CHECK(run_args({"wulff", "beta", "--config", bad.string(), "--out", o.out.string()}) == cli::kConfigError);
  CHECK(run_args({"wulff", "beta"}) == cli::kConfigError);
  const fs::path big = o.out / "big.json";
  write_text(big, R"({"N": 3, "p": 2, "q": 2, "lambda": 0.3})");
  CHECK(run_args({"wulff", "beta", "--config", big.string(), "--out", o.out.string()}) == cli::kConfigError);
}

TEST_CASE("norm json round trip") {
  for (const json& j : {json{{"family", "euclidean"}}, json{{"family", "rnorm"}, {"r", 4.0}},
                        json{{"family", "ellipse"}, {"axes", {2.0, 1.0}}}}) {
    const AnisoNorm n = norm_from_json(j);
    const AnisoNorm m = norm_from_json(json(norm_to_json(n)));
    CHECK(h_eval(n, vec2(0.3, -1.2)) == h_eval(m, vec2(0.3, -1.2)));
  }
}
