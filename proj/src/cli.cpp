// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#include "parex/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>
#include <vector>

#include "parex/csv.hpp"
#include "parex/errors.hpp"
#include "parex/inequalities.hpp"
#include "parex/solver.hpp"
#include "parex/spaces.hpp"

namespace parex {

namespace {

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

double to_double(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw ConfigError("line " + std::to_string(line) + ": expected a number, got '" + s + "'");
  }
}

long to_long(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw ConfigError("line " + std::to_string(line) + ": expected an integer, got '" + s + "'");
  }
}

SpaceTimeBox domain_box(const RunConfig& cfg) {
  if (cfg.domain == "unit_square") return SpaceTimeBox::unit_cylinder(cfg.T);
  return SpaceTimeBox::ball_cylinder(cfg.disk_radius, cfg.T);
}

ExponentField build_exponent(const std::string& text, const RunConfig& cfg, int line) {
  auto tok = tokens(text);
  SpaceTimeBox box = domain_box(cfg);
  try {
    if (tok.empty()) throw ConfigError("empty exponent spec");
    if (tok[0] == "constant") {
      if (tok.size() != 2) throw ConfigError("usage: constant <v>");
      return ExponentField::constant(to_double(tok[1], line), box);
    }
    if (tok[0] == "affine") {
      if (tok.size() != 5) throw ConfigError("usage: affine <a> <b1> <b2> <bt>");
      return ExponentField::affine(to_double(tok[1], line), to_double(tok[2], line), to_double(tok[3], line),
                                   to_double(tok[4], line), box);
    }
    if (tok[0] == "bump") {
      CounterexampleSpec cs;
      cs.time_horizon = cfg.T;
      RadialCounterexample ce(cs, 1024);
      SampleLattice lat = SampleLattice::tensor(box, 4, 48, 48);
      return ExponentField([ce](double, Vec2 x) { return ce.exponent(x.norm()); }, box, lat);
    }
    throw ConfigError("unknown exponent kind '" + tok[0] + "'");
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("line " + std::to_string(line) + ": " + e.name() + ": " + e.what());
  }
}

void validate(const RunConfig& cfg) {
  auto fail = [](int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
  };
  if (cfg.command != "solve" && cfg.command != "verify-structure" && cfg.command != "inequalities" &&
      cfg.command != "counterexample" && cfg.command != "convergence")
    fail(0, "unknown command '" + cfg.command + "'");
  if (cfg.domain != "unit_square" && cfg.domain != "disk") fail(0, "unknown domain '" + cfg.domain + "'");
  if (cfg.levels < 1 || cfg.levels > 8) fail(0, "levels must be in [1, 8]");
  if (cfg.steps < 1) fail(0, "steps must be >= 1");
  if (!(cfg.T > 0.0)) fail(0, "T must be positive");
  if (!(cfg.delta >= 0.0)) fail(0, "delta must be >= 0");
  if (cfg.lower_order != "zero" && cfg.lower_order != "linear_damping" && cfg.lower_order != "saturating")
    fail(0, "unknown lower_order mode '" + cfg.lower_order + "'");
  if (cfg.quad_degree != 1 && cfg.quad_degree != 2 && cfg.quad_degree != 5)
    fail(0, "quad_degree must be one of 1, 2, 5");
  if (!(cfg.eps_star > 0.0)) fail(0, "eps_star must be positive");
  if (cfg.truncations < 1 || cfg.truncations > 400) fail(0, "truncations must be in [1, 400]");
}

struct BuiltProblem {
  ProblemSpec spec;
  Domain domain;
};

LowerOrderMode lower_mode(const std::string& s) {
  if (s == "zero") return LowerOrderMode::zero;
  if (s == "linear_damping") return LowerOrderMode::linear_damping;
  return LowerOrderMode::saturating;
}

BuiltProblem build_problem(const RunConfig& cfg) {
  ExponentField p = build_exponent(cfg.exponent, cfg, 0);
  ExponentField q = build_exponent(cfg.q_exponent, cfg, 0);
  double eps_cap = parabolic_star(p.p_minus(), 2) - 1.0;
  double eps_star = std::min(cfg.eps_star, eps_cap);

  ExponentField r_field(
      [p, eps_star](double t, Vec2 x) { return std::max(2.0, parabolic_star(p(t, x), 2)) - eps_star; },
      p.domain(), SampleLattice::tensor(p.domain(), 4, 16, 16));

  ProblemSpec spec;
  spec.flux = prototype_flux(p, cfg.delta);
  spec.lower = default_lower_order(r_field, cfg.c2, lower_mode(cfg.lower_order));
  spec.T_final = cfg.T;
  spec.q = q;
  spec.p = p;
  spec.quad_degree = cfg.quad_degree;
  spec.lower.eps_star = eps_star;

  auto ftok = tokens(cfg.source_f);
  if (ftok.empty() || ftok[0] == "zero") {
    spec.f_source = [](double, Vec2) { return Vec2{0, 0}; };
  } else if (ftok[0] == "constant" && ftok.size() == 3) {
    double fx = to_double(ftok[1], 0), fy = to_double(ftok[2], 0);
    spec.f_source = [fx, fy](double, Vec2) { return Vec2{fx, fy}; };
  } else if (ftok[0] == "manufactured") {
    spec.f_source = [](double t, Vec2 x) {
      double w = std::sin(M_PI * x.x) * std::sin(M_PI * x.y);
      double cc = std::cos(M_PI * x.x) * std::cos(M_PI * x.y);
      double v = std::exp(-t) * (-w + 1.5 * M_PI * M_PI * w - 0.5 * M_PI * M_PI * cc);
      return Vec2{v, v};
    };
  } else {
    throw ConfigError("source_f: expected 'zero', 'constant <fx> <fy>' or 'manufactured'");
  }

  auto Ftok = tokens(cfg.source_F);
  if (Ftok.empty() || Ftok[0] == "zero") {
    spec.F_source = [](double, Vec2) { return SymTensor2{}; };
  } else if (Ftok[0] == "constant" && Ftok.size() == 4) {
    double xx = to_double(Ftok[1], 0), yy = to_double(Ftok[2], 0), xy = to_double(Ftok[3], 0);
    spec.F_source = [xx, yy, xy](double, Vec2) { return SymTensor2{xx, yy, xy}; };
  } else {
    throw ConfigError("source_F: expected 'zero' or 'constant <xx> <yy> <xy>'");
  }

  Domain dom = cfg.domain == "unit_square" ? Domain{UnitSquare{}} : Domain{Disk{cfg.disk_radius}};
  if (cfg.u0 == "zero") {
    spec.u0 = [](Vec2) { return Vec2{0, 0}; };
  } else if (cfg.u0 == "sine") {
    spec.u0 = [](Vec2 x) {
      double w = std::sin(M_PI * x.x) * std::sin(M_PI * x.y);
      return Vec2{w, w};
    };
  } else if (cfg.u0 == "bump") {
    if (cfg.domain == "unit_square") {
      spec.u0 = [](Vec2 x) {
        double w = 16.0 * x.x * (1.0 - x.x) * x.y * (1.0 - x.y);
        return Vec2{w, w};
      };
    } else {
      double R = cfg.disk_radius;
      spec.u0 = [R](Vec2 x) {
        double s = 1.0 - (x.dot(x)) / (R * R);
        double w = s > 0.0 ? s * s : 0.0;
        return Vec2{w, w};
      };
    }
  } else {
    throw ConfigError("u0: expected 'zero', 'sine' or 'bump'");
  }

  try {
    spec.validate(SampleLattice::tensor(p.domain(), 8, 16, 16));
  } catch (const Error& e) {
    throw ConfigError(std::string(e.name()) + ": " + e.what());
  }
  return {std::move(spec), dom};
}

struct Manifest {
  std::vector<std::pair<std::string, long>> files;
  void add(const CsvWriter& w) { files.emplace_back(w.path(), w.rows()); }
};

void write_manifest(const Manifest& m, const std::string& out_dir) {
  std::FILE* f = std::fopen((out_dir + "/manifest.csv").c_str(), "w");
  if (!f) throw ConfigError("cannot write manifest in " + out_dir);
  std::fprintf(f, "file,rows\n");
  for (const auto& [path, rows] : m.files) {
    std::string base = std::filesystem::path(path).filename().string();
    std::fprintf(f, "%s,%ld\n", base.c_str(), rows);
  }
  std::fclose(f);
}

int run_counterexample(const RunConfig& cfg, Manifest& manifest) {
  CounterexampleSpec cs;
  cs.time_horizon = cfg.T;
  RadialCounterexample ce(cs);
  std::vector<double> taus;
  for (int k = 1; k <= cfg.truncations; ++k) taus.push_back(std::pow(10.0, -k));
  auto table = ce.truncation_table(taus);
  {
    CsvWriter w(cfg.out_dir + "/counterexample.csv", "tau,rho_u,rho_grad,rho_u_pminus");
    for (const auto& r : table) w.row({r.tau, r.rho_u, r.rho_grad, r.rho_u_pminus});
    manifest.add(w);
  }
  {
    CsvWriter w(cfg.out_dir + "/figure1.csv", "r,eta,grad_eta,p");
    for (const auto& r : ce.profile()) w.row({r.r, r.eta, r.grad, r.p});
    manifest.add(w);
  }
  // pass: u-modular increments keep growing at a stable per-decade rate while
  // the gradient increments decay
  bool pass = table.size() >= 3;
  if (pass) {
    std::size_t n = table.size();
    double inc_u_last = table[n - 1].rho_u - table[n - 2].rho_u;
    double inc_u_prev = table[n - 2].rho_u - table[n - 3].rho_u;
    double inc_g_last = table[n - 1].rho_grad - table[n - 2].rho_grad;
    double inc_g_first = table[1].rho_grad - table[0].rho_grad;
    pass = inc_u_last > 0.0 && std::abs(inc_u_prev / inc_u_last - 1.0) < 0.1 &&
           inc_g_last < 0.5 * inc_g_first;
  }
  return pass ? 0 : 1;
}

int run_verify_structure(const RunConfig& cfg, Manifest& manifest) {
  BuiltProblem built = build_problem(cfg);
  auto [s2, s3] = check_growth_coercivity(built.spec.flux, cfg.samples, cfg.seed);
  ConditionReport s4 = check_monotone(built.spec.flux, cfg.samples, cfg.seed + 1);
  auto [b2, b3] = check_lower_order(built.spec.lower, cfg.samples, cfg.seed + 2);
  CsvWriter w(cfg.out_dir + "/structure_report.csv", "condition_id,samples,worst_slack,t,x1,x2");
  bool pass = true;
  for (const auto* rep : {&s2, &s3, &s4, &b2, &b3}) {
    w.row_labeled(rep->condition_id,
                  {static_cast<double>(rep->samples), rep->worst_slack, rep->worst_point.t,
                   rep->worst_point.x.x, rep->worst_point.x.y});
    pass = pass && rep->worst_slack >= -1e-9;
  }
  manifest.add(w);
  return pass ? 0 : 1;
}

int run_inequalities(const RunConfig& cfg, Manifest& manifest) {
  auto hierarchy = build_mesh_hierarchy(Domain{UnitSquare{}}, 4);
  const MeshLevel& mesh = *hierarchy[3];
  SpaceTimeBox box = SpaceTimeBox::unit_cylinder(1.0);
  ExponentField p = ExponentField::affine(1.4, 0.5, 0.0, 0.1, box);
  double eps_star = 0.2;

  auto calib = random_trajectory_slices(mesh, p, eps_star, 50, 4, cfg.seed);
  auto valid = random_trajectory_slices(mesh, p, eps_star, 50, 4, cfg.seed + 1000);

  bool all_pass = true;
  {
    // the failure construction belongs to the calibration family: shallow
    // truncation slices calibrate, deeper ones validate
    CounterexampleSpec cs;
    RadialCounterexample ce(cs, 1024);
    auto with_ce_cal = calib;
    for (double t : {1e-1, 1e-3, 1e-5, 1e-7}) {
      auto s = ce.slice(t, eps_star);
      with_ce_cal.push_back({s.rho_u, s.rho_eps, s.rho_u_star, s.y_norm});
    }
    RepairConstants rc = fit_repair_constants(with_ce_cal);
    auto with_ce = valid;
    for (double t : {1e-2, 1e-4, 1e-6, 1e-8, 1e-9}) {
      auto s = ce.slice(t, eps_star);
      with_ce.push_back({s.rho_u, s.rho_eps, s.rho_u_star, s.y_norm});
    }
    InequalityReport rep = poincare_repair_check(with_ce, rc);
    CsvWriter w(cfg.out_dir + "/poincare_repair.csv", "name,samples,fitted_c,fitted_gamma,worst_ratio,pass");
    w.row_labeled(rep.name, {static_cast<double>(rep.samples), rep.fitted_c, rep.fitted_gamma,
                             rep.worst_ratio, rep.pass ? 1.0 : 0.0});
    manifest.add(w);
    all_pass = all_pass && rep.pass;
  }
  {
    RepairConstants rc = fit_interpolation_constants(calib);
    InequalityReport rep = variable_interpolation_check(valid, rc);
    CsvWriter w(cfg.out_dir + "/variable_interpolation.csv",
                "name,samples,fitted_c,fitted_gamma,worst_ratio,pass");
    w.row_labeled(rep.name, {static_cast<double>(rep.samples), rep.fitted_c, rep.fitted_gamma,
                             rep.worst_ratio, rep.pass ? 1.0 : 0.0});
    manifest.add(w);
    all_pass = all_pass && rep.pass;
  }
  {
    std::mt19937_64 rng(cfg.seed + 7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<FEFunction> calib_fields, valid_fields;
    for (int i = 0; i < 60; ++i) {
      FEFunction u(mesh);
      for (int v = 0; v < mesh.n_vertices(); ++v)
        if (!mesh.boundary[v]) u.set_value(v, {dist(rng), dist(rng)});
      (i < 30 ? calib_fields : valid_fields).push_back(std::move(u));
    }
    CsvWriter wk(cfg.out_dir + "/korn.csv", "name,samples,fitted_c,fitted_gamma,worst_ratio,pass");
    for (double s : {1.5, 2.0, 3.0}) {
      double frozen = 1.5 * korn_worst_ratio(calib_fields, s);
      InequalityReport rep = korn_check(valid_fields, s, frozen);
      wk.row_labeled(rep.name, {static_cast<double>(rep.samples), rep.fitted_c, rep.fitted_gamma,
                                rep.worst_ratio, rep.pass ? 1.0 : 0.0});
      all_pass = all_pass && rep.pass;
    }
    manifest.add(wk);
    CsvWriter wg(cfg.out_dir + "/gagliardo_nirenberg.csv",
                 "name,samples,fitted_c,fitted_gamma,worst_ratio,pass");
    struct GNCase {
      double s, r, theta;
    };
    for (GNCase c : {GNCase{2.0, 2.0, 0.5}, GNCase{2.0, 1.5, 0.4}, GNCase{1.5, 2.0, 0.3}}) {
      double frozen = 1.5 * gn_worst_ratio(calib_fields, c.s, c.r, c.theta);
      InequalityReport rep = gn_check(valid_fields, c.s, c.r, c.theta, frozen);
      wg.row_labeled(rep.name, {static_cast<double>(rep.samples), rep.fitted_c, rep.fitted_gamma,
                                rep.worst_ratio, rep.pass ? 1.0 : 0.0});
      all_pass = all_pass && rep.pass;
    }
    manifest.add(wg);
  }
  return all_pass ? 0 : 1;
}

int run_solve(const RunConfig& cfg, Manifest& manifest) {
  BuiltProblem built = build_problem(cfg);
  auto hierarchy = build_mesh_hierarchy(built.domain, cfg.levels);
  const MeshLevel& mesh = *hierarchy.back();
  NewtonConfig ncfg{cfg.newton_max_iter, cfg.newton_tol, 1.0};
  auto [state, ledger] = run_galerkin(built.spec, mesh, cfg.steps, ncfg);

  double tol = cfg.tol_energy * (1.0 + ledger.initial_kinetic);
  bool pass = true;
  {
    CsvWriter w(cfg.out_dir + "/energy.csv", "k,t,kinetic,dissipation,work,slack");
    for (const auto& r : ledger.rows) {
      w.row({static_cast<double>(r.k), r.t, r.kinetic, r.dissipation, r.work, r.slack});
      pass = pass && r.slack >= -tol;
    }
    manifest.add(w);
  }
  if (cfg.snapshot_stride > 0) {
    {
      CsvWriter w(cfg.out_dir + "/mesh_vertices.csv", "vertex_id,x1,x2,boundary");
      for (int i = 0; i < mesh.n_vertices(); ++i)
        w.row({static_cast<double>(i), mesh.vertices[i].x, mesh.vertices[i].y,
               static_cast<double>(mesh.boundary[i])});
      manifest.add(w);
    }
    {
      CsvWriter w(cfg.out_dir + "/mesh_triangles.csv", "tri_id,v0,v1,v2");
      for (int k = 0; k < mesh.n_triangles(); ++k)
        w.row({static_cast<double>(k), static_cast<double>(mesh.triangles[k].v[0]),
               static_cast<double>(mesh.triangles[k].v[1]), static_cast<double>(mesh.triangles[k].v[2])});
      manifest.add(w);
    }
    {
      DiscreteField strain = symmetric_gradient(state.trajectory.back(), cfg.T);
      long rows = write_field_csv(strain, cfg.out_dir + "/strain_final.csv");
      manifest.files.emplace_back(cfg.out_dir + "/strain_final.csv", rows);
    }
    for (std::size_t k = 0; k < state.trajectory.size(); k += cfg.snapshot_stride) {
      char name[64];
      std::snprintf(name, sizeof(name), "/traj_%04zu.csv", k);
      CsvWriter w(cfg.out_dir + name, "vertex_id,x1,x2,u1,u2");
      for (int i = 0; i < mesh.n_vertices(); ++i) {
        Vec2 v = state.trajectory[k].value(i);
        w.row({static_cast<double>(i), mesh.vertices[i].x, mesh.vertices[i].y, v.x, v.y});
      }
      manifest.add(w);
    }
  }
  {
    // audit of the terminal state in the modular/norm bookkeeping
    CsvWriter w(cfg.out_dir + "/audit.csv", "label,modular,norm");
    DiscreteField strain = symmetric_gradient(state.trajectory.back(), cfg.T);
    double mod = modular(strain, built.spec.p).value;
    double nrm = luxemburg_norm(strain, built.spec.p, 1e-10);
    w.row_labeled("strain_final", {mod, nrm});
    DiscreteField uf = fe_vector_field(state.trajectory.back(), cfg.quad_degree, cfg.T);
    w.row_labeled("state_final", {modular(uf, built.spec.q).value, luxemburg_norm(uf, built.spec.q, 1e-10)});
    manifest.add(w);
  }
  return pass ? 0 : 1;
}

int run_convergence(const RunConfig& cfg, Manifest& manifest) {
  BuiltProblem built = build_problem(cfg);
  auto hierarchy = build_mesh_hierarchy(built.domain, cfg.levels);
  std::vector<const MeshLevel*> levels;
  for (const auto& l : hierarchy) levels.push_back(l.get());
  // drop levels without interior vertices; they carry only the zero function
  while (!levels.empty() && levels.front()->n_interior() == 0) levels.erase(levels.begin());
  if (levels.size() < 2) throw MeshError("convergence study needs at least two levels with interior DOFs");
  NewtonConfig ncfg{cfg.newton_max_iter, cfg.newton_tol, 1.0};
  ConvergenceReport rep = galerkin_convergence_study(built.spec, levels, cfg.steps, ncfg);
  CsvWriter w(cfg.out_dir + "/convergence.csv", "coarse_level,diff_l2,diff_modular,proxy_fine");
  for (std::size_t i = 0; i < rep.rows.size(); ++i)
    w.row({static_cast<double>(rep.rows[i].coarse_level), rep.rows[i].diff_l2, rep.rows[i].diff_modular,
           rep.proxy_norm[i + 1]});
  manifest.add(w);
  return rep.differences_nonincreasing ? 0 : 1;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool command_set = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    std::string stripped;
    for (char c : line)
      if (!is_space(c) || !stripped.empty()) stripped.push_back(c);
    while (!stripped.empty() && is_space(stripped.back())) stripped.pop_back();
    if (stripped.empty()) continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = stripped.substr(0, eq);
    std::string value = stripped.substr(eq + 1);
    while (!key.empty() && is_space(key.back())) key.pop_back();
    while (!value.empty() && is_space(value.front())) value.erase(value.begin());

    if (key == "command") {
      cfg.command = value;
      command_set = true;
    } else if (key == "domain")
      cfg.domain = value;
    else if (key == "disk_radius")
      cfg.disk_radius = to_double(value, lineno);
    else if (key == "levels")
      cfg.levels = static_cast<int>(to_long(value, lineno));
    else if (key == "steps")
      cfg.steps = static_cast<int>(to_long(value, lineno));
    else if (key == "T")
      cfg.T = to_double(value, lineno);
    else if (key == "exponent")
      cfg.exponent = value;
    else if (key == "q_exponent")
      cfg.q_exponent = value;
    else if (key == "flux")
      cfg.flux = value;
    else if (key == "delta")
      cfg.delta = to_double(value, lineno);
    else if (key == "lower_order")
      cfg.lower_order = value;
    else if (key == "c2")
      cfg.c2 = to_double(value, lineno);
    else if (key == "eps_star")
      cfg.eps_star = to_double(value, lineno);
    else if (key == "source_f")
      cfg.source_f = value;
    else if (key == "source_F")
      cfg.source_F = value;
    else if (key == "u0")
      cfg.u0 = value;
    else if (key == "tol_energy")
      cfg.tol_energy = to_double(value, lineno);
    else if (key == "newton_tol")
      cfg.newton_tol = to_double(value, lineno);
    else if (key == "newton_max_iter")
      cfg.newton_max_iter = static_cast<int>(to_long(value, lineno));
    else if (key == "quad_degree")
      cfg.quad_degree = static_cast<int>(to_long(value, lineno));
    else if (key == "seed")
      cfg.seed = static_cast<std::uint64_t>(to_long(value, lineno));
    else if (key == "samples")
      cfg.samples = to_long(value, lineno);
    else if (key == "truncations")
      cfg.truncations = static_cast<int>(to_long(value, lineno));
    else if (key == "suite")
      cfg.suite = value;
    else if (key == "snapshot_stride")
      cfg.snapshot_stride = static_cast<int>(to_long(value, lineno));
    else if (key == "out_dir")
      cfg.out_dir = value;
    else if (key == "quiet")
      cfg.quiet = value == "true" || value == "1";
    else
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (!command_set) throw ConfigError("missing 'command' key");
  validate(cfg);
  if (cfg.flux != "prototype") throw ConfigError("flux: only 'prototype' is available");
  // eagerly build fields so degenerate specs surface as config errors with
  // the module error name
  if (cfg.command == "solve" || cfg.command == "convergence" || cfg.command == "verify-structure")
    build_problem(cfg);
  return cfg;
}

int run(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  Manifest manifest;
  int status = 1;
  if (cfg.command == "counterexample")
    status = run_counterexample(cfg, manifest);
  else if (cfg.command == "verify-structure")
    status = run_verify_structure(cfg, manifest);
  else if (cfg.command == "inequalities")
    status = run_inequalities(cfg, manifest);
  else if (cfg.command == "solve")
    status = run_solve(cfg, manifest);
  else if (cfg.command == "convergence")
    status = run_convergence(cfg, manifest);
  else
    throw ConfigError("unknown command '" + cfg.command + "'");
  write_manifest(manifest, cfg.out_dir);
  return status;
}

}  // namespace parex
