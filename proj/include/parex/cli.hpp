// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace parex {

// Flat key = value run configuration; '#' starts a comment. Every numeric
// parameter is validated against the owning module's preconditions before
// dispatch.
struct RunConfig {
  std::string command;  // solve | verify-structure | inequalities | counterexample | convergence
  std::string domain{"unit_square"};
  double disk_radius{2.5};
  int levels{3};
  int steps{16};
  double T{1.0};
  std::string exponent{"constant 2"};
  std::string q_exponent{"constant 2"};
  std::string flux{"prototype"};
  double delta{0.1};
  std::string lower_order{"zero"};
  double c2{0.0};
  double eps_star{0.2};
  std::string source_f{"zero"};
  std::string source_F{"zero"};
  std::string u0{"zero"};
  double tol_energy{1e-8};
  double newton_tol{1e-10};
  int newton_max_iter{30};
  int quad_degree{2};
  std::uint64_t seed{42};
  long samples{10000};
  int truncations{5};
  std::string suite{"all"};
  int snapshot_stride{0};
  std::string out_dir{"."};
  bool quiet{false};
};

// Parses and validates the document; the first offending line is reported
// with its number and the underlying module error name.
RunConfig parse_config(const std::string& text);

// Executes the configured command, writing every artifact plus manifest.csv
// into out_dir. Returns 0 iff all pass flags are true.
int run(const RunConfig& config);

}  // namespace parex
