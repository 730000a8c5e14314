#include <silhlab/cli_app.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"

using namespace silhlab;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliResult res;
  res.code = cli::run(std::move(args), out, err);
  res.out = out.str();
  res.err = err.str();
  return res;
}

bool no_tmp_leftovers(const std::string& dir) {
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.size() >= 4 && name.compare(name.size() - 4, 4, ".tmp") == 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("cli gen") {
  auto res = run_cli({"gen", "icosphere:1"});
  REQUIRE(res.code == 0);
  CHECK(res.out.rfind("OFF\n", 0) == 0);
  CHECK(res.out.find("42 80 0") != std::string::npos);  // OFF convention: edge count 0

  std::string dir = testsupport::make_temp_dir();
  std::string path = dir + "/ico.off";
  auto to_file = run_cli({"gen", "icosphere:1", "--out", path});
  REQUIRE(to_file.code == 0);
  CHECK(to_file.out.empty());
  CHECK(testsupport::slurp(path) == res.out);
  CHECK(no_tmp_leftovers(dir));

  auto again = run_cli({"gen", "icosphere:1", "--out", path});
  REQUIRE(again.code == 0);
  CHECK(testsupport::slurp(path) == res.out);

  auto bad = run_cli({"gen", "bogus:1"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("error:") != std::string::npos);
}

TEST_CASE("cli info") {
  auto res = run_cli({"info", "--family", "cyl:8,4,nocaps"});
  REQUIRE(res.code == 0);
  auto j = nlohmann::json::parse(res.out);
  CHECK(j["n_faces"] == 64);
  CHECK(j["n_boundary_edges"] == 16);
  CHECK(j["euler_characteristic"] == 0);

  // The same mesh through an OFF file gives the same statistics.
  std::string dir = testsupport::make_temp_dir();
  std::string path = dir + "/cyl.off";
  REQUIRE(run_cli({"gen", "cyl:8,4,nocaps", "--out", path}).code == 0);
  auto from_file = run_cli({"info", "--mesh", path});
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out == res.out);

  CHECK(run_cli({"info"}).code == 1);
  CHECK(run_cli({"info", "--mesh", path, "--family", "icosphere:1"}).code == 1);
  CHECK(run_cli({"info", "--mesh", dir + "/missing.off"}).code == 2);

  std::string corrupt = dir + "/corrupt.off";
  write_file_atomic(corrupt, "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 5\n");
  auto broken = run_cli({"info", "--mesh", corrupt});
  CHECK(broken.code == 2);
  CHECK(broken.err.find("line 6") != std::string::npos);
}

TEST_CASE("cli silhouette") {
  auto res = run_cli({"silhouette", "--family", "icosphere:1", "--view", "inf:0,0,1"});
  REQUIRE(res.code == 0);
  auto j = nlohmann::json::parse(res.out);
  CHECK(j["n_boundary"] == 0);
  CHECK(j["n_edges"].get<int>() == j["n_interior"].get<int>());
  CHECK(j["projected_length"].get<double>() > 0.0);
  auto ids = j["edge_ids"].get<std::vector<int>>();
  CHECK(std::is_sorted(ids.begin(), ids.end()));

  auto finite = run_cli({"silhouette", "--family", "icosphere:1", "--view", "pt:3,0,0"});
  REQUIRE(finite.code == 0);
  CHECK(nlohmann::json::parse(finite.out)["projected_length"].is_null());

  std::string dir = testsupport::make_temp_dir();
  std::string svg_path = dir + "/view.svg";
  auto svg = run_cli({"silhouette", "--family", "icosphere:1", "--view", "inf:1,2,3", "--svg", svg_path});
  REQUIRE(svg.code == 0);
  std::string svg_text = testsupport::slurp(svg_path);
  CHECK(svg_text.find("<svg") != std::string::npos);
  CHECK(testsupport::xml_well_formed(svg_text));
  auto svg2 = run_cli({"silhouette", "--family", "icosphere:1", "--view", "inf:1,2,3", "--svg", svg_path});
  REQUIRE(svg2.code == 0);
  CHECK(testsupport::slurp(svg_path) == svg_text);
  CHECK(no_tmp_leftovers(dir));

  auto svg_finite = run_cli({"silhouette", "--family", "icosphere:1", "--view", "pt:3,0,0", "--svg",
                             dir + "/bad.svg"});
  CHECK(svg_finite.code == 1);
  CHECK(svg_finite.err.find("infinity") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(dir + "/bad.svg"));

  auto ra = run_cli({"silhouette", "--family", "icosphere:1", "--view", "random", "--seed", "5"});
  auto rb = run_cli({"silhouette", "--family", "icosphere:1", "--view", "random", "--seed", "5"});
  auto rc = run_cli({"silhouette", "--family", "icosphere:1", "--view", "random", "--seed", "6"});
  REQUIRE(ra.code == 0);
  CHECK(ra.out == rb.out);
  CHECK(ra.out != rc.out);

  CHECK(run_cli({"silhouette", "--family", "icosphere:1", "--view", "sideways"}).code == 2);
  CHECK(run_cli({"silhouette", "--family", "icosphere:1", "--view", "inf:1,2"}).code == 2);
}

TEST_CASE("cli expect") {
  auto res = run_cli({"expect", "--family", "icosphere:1", "--samples", "400", "--seed", "3"});
  REQUIRE(res.code == 0);
  auto j = nlohmann::json::parse(res.out);
  CHECK(j["samples"] == 400);
  CHECK(j["model"] == "inf");
  double exact = j["exact"].get<double>();
  CHECK(std::abs(j["mc_mean"].get<double>() - exact) < 6.0 * j["mc_std_error"].get<double>());

  auto t1 = run_cli({"expect", "--family", "icosphere:1", "--samples", "400", "--seed", "3",
                     "--threads", "1"});
  auto t3 = run_cli({"expect", "--family", "icosphere:1", "--samples", "400", "--seed", "3",
                     "--threads", "3"});
  REQUIRE(t1.code == 0);
  CHECK(t1.out == res.out);
  CHECK(t3.out == res.out);

  auto ball = run_cli({"expect", "--family", "icosphere:1", "--samples", "400", "--model",
                       "ball:0,0,0,50"});
  REQUIRE(ball.code == 0);
  auto bj = nlohmann::json::parse(ball.out);
  CHECK(bj["exact"].is_null());
  CHECK(bj["model"].get<std::string>().rfind("ball:", 0) == 0);

  CHECK(run_cli({"expect", "--family", "icosphere:1", "--model", "cone:1"}).code == 2);
  CHECK(run_cli({"expect", "--family", "icosphere:1", "--samples", "1"}).code == 1);
}

TEST_CASE("cli check") {
  auto res = run_cli({"check", "--family", "icosphere:2"});
  REQUIRE(res.code == 0);
  auto j = nlohmann::json::parse(res.out);
  CHECK(j["n"] == 320);
  CHECK(j["closest_point_caveat"] == false);
  CHECK(j["grid_depth"] == 4);

  std::string dir = testsupport::make_temp_dir();
  std::string path = dir + "/ico.off";
  REQUIRE(run_cli({"gen", "icosphere:2", "--out", path}).code == 0);
  auto from_file = run_cli({"check", "--mesh", path, "--surface", "sphere:r=1"});
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out == res.out);

  auto no_surface = run_cli({"check", "--mesh", path});
  CHECK(no_surface.code == 1);
  CHECK(no_surface.err.find("--surface") != std::string::npos);

  auto cert = run_cli({"check", "--family", "icosphere", "--sizes", "1,2,3"});
  REQUIRE(cert.code == 0);
  CHECK(nlohmann::json::parse(cert.out)["verdict"] == "PASS");

  auto lantern = run_cli({"check", "--family", "lantern:8", "--sizes", "1,4,16", "--depth", "2"});
  REQUIRE(lantern.code == 0);
  auto lj = nlohmann::json::parse(lantern.out);
  CHECK(lj["verdict"] == "FAIL(hypothesis 3, n=256)");
  CHECK(lj["reports"].size() == 3);

  auto csv = run_cli({"check", "--family", "lantern:8", "--sizes", "1,4,16", "--depth", "2",
                      "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("n,alpha,beta,gamma,fatness\n", 0) == 0);

  CHECK(run_cli({"check", "--mesh", path, "--sizes", "1,2,3"}).code == 1);
  CHECK(run_cli({"check", "--family", "icosphere", "--sizes", "1,2"}).code == 3);
  CHECK(run_cli({"check", "--family", "icosphere", "--sizes", "1,x"}).code == 2);
}

TEST_CASE("cli sweep and fit") {
  std::string dir = testsupport::make_temp_dir();
  std::string csv_path = dir + "/records.csv";
  std::string json_path = dir + "/records.json";

  auto sweep = run_cli({"sweep", "--family", "icosphere", "--sizes", "1,2,3", "--samples", "300",
                        "--seed", "1", "--depth", "2", "--out", csv_path});
  REQUIRE(sweep.code == 0);
  std::string csv = testsupport::slurp(csv_path);
  CHECK(csv.rfind(kSweepCsvHeader, 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  auto sweep_json = run_cli({"sweep", "--family", "icosphere", "--sizes", "1,2,3", "--samples", "300",
                             "--seed", "1", "--depth", "2", "--out", json_path});
  REQUIRE(sweep_json.code == 0);
  auto records = nlohmann::json::parse(testsupport::slurp(json_path));
  REQUIRE(records.size() == 3);
  CHECK(records[0]["family"] == "icosphere:1");

  auto rerun = run_cli({"sweep", "--family", "icosphere", "--sizes", "1,2,3", "--samples", "300",
                        "--seed", "1", "--depth", "2"});
  REQUIRE(rerun.code == 0);
  CHECK(rerun.out == csv);
  CHECK(no_tmp_leftovers(dir));

  auto fit_csv = run_cli({"fit", "--in", csv_path});
  REQUIRE(fit_csv.code == 0);
  auto fj = nlohmann::json::parse(fit_csv.out);
  CHECK(fj["exponent"].get<double>() == Catch::Approx(0.5).margin(0.1));
  CHECK(fj["r_squared"].get<double>() > 0.9);

  // The CSV keeps 17 significant digits, so both paths fit identical records.
  auto fit_json = run_cli({"fit", "--in", json_path});
  REQUIRE(fit_json.code == 0);
  CHECK(fit_json.out == fit_csv.out);

  auto with_bound = run_cli({"fit", "--in", csv_path, "--silh", "6.283185307179586"});
  REQUIRE(with_bound.code == 0);
  auto bj = nlohmann::json::parse(with_bound.out);
  CHECK(bj["bound_holds_all"] == true);
  CHECK(bj["bound_checks"].size() == 3);

  CHECK(run_cli({"sweep", "--family", "icosphere", "--sizes", "1,2", "--samples", "300"}).code == 3);
  CHECK(run_cli({"sweep", "--family", "icosphere", "--sizes", "a,b"}).code == 2);
  CHECK(run_cli({"sweep", "--family", "bogus", "--sizes", "1,2,3"}).code == 2);
  CHECK(run_cli({"fit", "--in", dir + "/missing.csv"}).code == 2);
  write_file_atomic(dir + "/corrupt.csv", "wrong,header\n1,2\n");
  CHECK(run_cli({"fit", "--in", dir + "/corrupt.csv"}).code == 3);
}

TEST_CASE("cli help and usage errors") {
  auto help = run_cli({"--help"});
  REQUIRE(help.code == 0);
  for (const char* name : {"gen", "info", "silhouette", "expect", "check", "sweep", "fit"})
    CHECK(help.out.find(name) != std::string::npos);

  auto expect_help = run_cli({"expect", "--help"});
  REQUIRE(expect_help.code == 0);
  CHECK(expect_help.out.find("--samples") != std::string::npos);
  CHECK(expect_help.out.find("10000") != std::string::npos);
  CHECK(expect_help.out.find("--model") != std::string::npos);

  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"gen"}).code == 1);
}
