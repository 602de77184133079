// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "parex/cli.hpp"
#include "parex/errors.hpp"

using namespace parex;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

long count_rows(const std::string& csv_text) {
  long n = -1;  // skip header
  std::istringstream in(csv_text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

std::string temp_dir(const std::string& tag) {
  std::string d = (std::filesystem::temp_directory_path() / ("parex_test_" + tag)).string();
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("minimal solve config parses") {
  RunConfig cfg = parse_config(
      "command = solve\n"
      "domain = unit_square\n"
      "levels = 3\n"
      "steps = 32\n"
      "T = 1\n"
      "exponent = constant 2\n"
      "flux = prototype\n"
      "delta = 0.1\n");
  CHECK(cfg.levels == 3);
  CHECK(cfg.steps == 32);
  CHECK(cfg.delta == 0.1);
}

TEST_CASE("config errors carry line numbers and module error names") {
  CHECK_THROWS_WITH_AS(parse_config("command = solve\nbogus_key = 1\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("command = solve\nlevels = soon\n"),
                       doctest::Contains("expected an integer"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("command = solve\nexponent = constant 1.0\n"),
                       doctest::Contains("DegenerateExponent"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("command = solve\nexponent = constant 2\nq_exponent = constant 5\n"),
                       doctest::Contains("ExponentOrderViolation"), ConfigError);
  CHECK_THROWS_AS(parse_config("command = warp\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("levels = 2\n"), ConfigError);  // missing command
}

TEST_CASE("counterexample command writes the contracted tables") {
  std::string out = temp_dir("ce");
  RunConfig cfg = parse_config("command = counterexample\ntruncations = 5\nout_dir = " + out + "\n");
  int status = run(cfg);
  CHECK(status == 0);
  CHECK(count_rows(slurp(out + "/counterexample.csv")) == 5);
  CHECK(count_rows(slurp(out + "/figure1.csv")) == 512);
  std::string manifest = slurp(out + "/manifest.csv");
  CHECK(manifest.find("counterexample.csv,5") != std::string::npos);
  CHECK(manifest.find("figure1.csv,512") != std::string::npos);
}

TEST_CASE("verify-structure emits five passing condition rows") {
  std::string out = temp_dir("vs");
  RunConfig cfg = parse_config(
      "command = verify-structure\n"
      "exponent = bump\n"
      "domain = disk\n"
      "samples = 2000\n"
      "seed = 42\n"
      "out_dir = " + out + "\n");
  CHECK(run(cfg) == 0);
  std::string rep = slurp(out + "/structure_report.csv");
  CHECK(count_rows(rep) == 5);
  for (const char* id : {"S2", "S3", "S4", "B2", "B3"}) CHECK(rep.find(id) != std::string::npos);
}

TEST_CASE("solve run: energy ledger on disk and deterministic reruns") {
  std::string out1 = temp_dir("solve1");
  std::string base =
      "command = solve\n"
      "domain = unit_square\n"
      "levels = 3\n"
      "steps = 8\n"
      "T = 0.5\n"
      "exponent = constant 2\n"
      "delta = 0\n"
      "source_f = manufactured\n"
      "u0 = sine\n"
      "seed = 42\n";
  RunConfig cfg1 = parse_config(base + "out_dir = " + out1 + "\n");
  CHECK(run(cfg1) == 0);
  std::string energy = slurp(out1 + "/energy.csv");
  CHECK(count_rows(energy) == 8);

  // slack column stays above the tolerance
  std::istringstream in(energy);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    auto pos = line.rfind(',');
    double slack = std::stod(line.substr(pos + 1));
    CHECK(slack >= -1e-8 * 2.0);
  }

  std::string out2 = temp_dir("solve2");
  RunConfig cfg2 = parse_config(base + "out_dir = " + out2 + "\n");
  CHECK(run(cfg2) == 0);
  CHECK(slurp(out1 + "/energy.csv") == slurp(out2 + "/energy.csv"));
  CHECK(slurp(out1 + "/audit.csv") == slurp(out2 + "/audit.csv"));
}

TEST_CASE("solve run with snapshots dumps mesh and trajectory tables") {
  std::string out = temp_dir("snap");
  RunConfig cfg = parse_config(
      "command = solve\n"
      "levels = 2\n"
      "steps = 4\n"
      "exponent = constant 2\n"
      "delta = 0\n"
      "u0 = bump\n"
      "snapshot_stride = 2\n"
      "out_dir = " + out + "\n");
  CHECK(run(cfg) == 0);
  CHECK(count_rows(slurp(out + "/mesh_vertices.csv")) == 9);
  CHECK(count_rows(slurp(out + "/mesh_triangles.csv")) == 8);
  CHECK(std::filesystem::exists(out + "/traj_0000.csv"));
  CHECK(std::filesystem::exists(out + "/traj_0004.csv"));
}

TEST_CASE("solve on the disk with the failure-construction exponent") {
  std::string out = temp_dir("diskbump");
  RunConfig cfg = parse_config(
      "command = solve\n"
      "domain = disk\n"
      "disk_radius = 2.5\n"
      "levels = 3\n"
      "steps = 8\n"
      "T = 0.5\n"
      "exponent = bump\n"
      "delta = 0.1\n"
      "lower_order = saturating\n"
      "u0 = bump\n"
      "out_dir = " + out + "\n");
  CHECK(run(cfg) == 0);
  CHECK(count_rows(slurp(out + "/energy.csv")) == 8);
}

TEST_CASE("inequalities command produces one csv per report family") {
  std::string out = temp_dir("ineq");
  RunConfig cfg = parse_config("command = inequalities\nseed = 42\nout_dir = " + out + "\n");
  CHECK(run(cfg) == 0);
  for (const char* f : {"poincare_repair.csv", "variable_interpolation.csv", "korn.csv",
                        "gagliardo_nirenberg.csv", "manifest.csv"})
    CHECK(std::filesystem::exists(out + "/" + f));
}

TEST_CASE("convergence command reports non-increasing differences") {
  std::string out = temp_dir("conv");
  RunConfig cfg = parse_config(
      "command = convergence\n"
      "levels = 4\n"
      "steps = 4\n"
      "T = 0.25\n"
      "exponent = affine 1.5 0.4 0 0\n"
      "delta = 0.1\n"
      "u0 = bump\n"
      "out_dir = " + out + "\n");
  CHECK(run(cfg) == 0);
  CHECK(count_rows(slurp(out + "/convergence.csv")) >= 1);
}
