// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "parex/cli.hpp"
#include "parex/errors.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parex::ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variable-exponent parabolic toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false, quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "RNG seed override")->each([&](const std::string&) { seed_set = true; });
    sub->add_flag("--quiet", quiet, "suppress progress output");
  };

  struct SubSpec {
    const char* name;
    const char* help;
  };
  for (SubSpec s : {SubSpec{"solve", "implicit Euler Galerkin run with energy ledger"},
                    SubSpec{"verify-structure", "sampled structure-condition sweeps"},
                    SubSpec{"inequalities", "calibrate-and-validate inequality suite"},
                    SubSpec{"counterexample", "Poincare failure truncation table"},
                    SubSpec{"convergence", "nested-level convergence study"}}) {
    add_common(app.add_subcommand(s.name, s.help));
  }

  // options consumed as direct overrides of config keys
  long samples = -1;
  int truncations = -1, levels = -1, steps = -1;
  std::string model, exponent, suite;
  for (auto* sub : app.get_subcommands({})) (void)sub;
  app.get_subcommand("verify-structure")->add_option("--samples", samples, "sample count");
  app.get_subcommand("verify-structure")->add_option("--model", model, "flux model (prototype)");
  app.get_subcommand("verify-structure")->add_option("--exponent", exponent, "exponent spec");
  app.get_subcommand("counterexample")->add_option("--truncations", truncations, "decades of tau");
  app.get_subcommand("inequalities")->add_option("--suite", suite, "suite selector");
  app.get_subcommand("solve")->add_option("--levels", levels, "mesh levels");
  app.get_subcommand("solve")->add_option("--steps", steps, "time steps");
  app.get_subcommand("convergence")->add_option("--levels", levels, "mesh levels");
  app.get_subcommand("convergence")->add_option("--steps", steps, "time steps");

  CLI11_PARSE(app, argc, argv);

  try {
    std::string text;
    if (!config_path.empty()) text = read_file(config_path);
    std::string command = app.get_subcommands().front()->get_name();
    {
      std::ostringstream extra;
      extra << "command = " << command << "\n";
      if (seed_set) extra << "seed = " << seed << "\n";
      if (samples >= 0) extra << "samples = " << samples << "\n";
      if (truncations >= 0) extra << "truncations = " << truncations << "\n";
      if (levels >= 0) extra << "levels = " << levels << "\n";
      if (steps >= 0) extra << "steps = " << steps << "\n";
      if (!model.empty()) extra << "flux = " << model << "\n";
      if (!exponent.empty()) extra << "exponent = " << exponent << "\n";
      if (!suite.empty()) extra << "suite = " << suite << "\n";
      extra << "out_dir = " << out_dir << "\n";
      if (quiet) extra << "quiet = true\n";
      text += "\n" + extra.str();
    }
    parex::RunConfig cfg = parex::parse_config(text);
    int status = parex::run(cfg);
    if (!cfg.quiet)
      std::fprintf(stderr, "%s: %s (artifacts in %s)\n", command.c_str(), status == 0 ? "pass" : "FAIL",
                   cfg.out_dir.c_str());
    return status;
  } catch (const parex::Error& e) {
    std::fprintf(stderr, "%s: %s\n", e.name().c_str(), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
