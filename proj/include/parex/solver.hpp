// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "parex/models.hpp"

namespace parex {

// Data of the evolution problem: flux, lower-order term, dual data u* kept in
// the J_eps(f, F) representation, initial value and exponents. Sources are
// analytic callables sampled at the active quadrature points.
struct ProblemSpec {
  FluxModel flux;
  LowerOrderModel lower;
  std::function<Vec2(double, Vec2)> f_source = [](double, Vec2) { return Vec2{0, 0}; };
  std::function<SymTensor2(double, Vec2)> F_source = [](double, Vec2) { return SymTensor2{}; };
  std::function<Vec2(Vec2)> u0 = [](Vec2) { return Vec2{0, 0}; };
  double T_final{1.0};
  ExponentField q;
  ExponentField p;
  int quad_degree{2};

  // Enforces 2 <= q <= max{2, p_* - eps_star} on the lattice.
  void validate(const SampleLattice& lattice) const;
};

struct GalerkinState {
  int level{0};
  std::vector<double> time_grid;       // 0 = t_0 < ... < t_K = T
  std::vector<FEFunction> trajectory;  // per time level, trajectory[0] = projected u0
};

struct EnergyLedger {
  struct Row {
    int k;
    double t;
    double kinetic;      // 1/2 ||u^k||_Y^2
    double dissipation;  // dt <A(t_k) u^k, u^k>
    double work;         // dt <u*(t_k), u^k>
    double slack;        // cumulative inequality slack, must stay >= -tol
  };
  double initial_kinetic{0.0};
  std::vector<Row> rows;
};

struct NewtonConfig {
  int max_iter{30};
  double tol_res{1e-10};
  double damping{1.0};  // initial step scale; backtracking halves from here
};

// Mass-matrix L2 projection onto the vector P1 space with zero trace.
FEFunction project_initial(const std::function<Vec2(Vec2)>& u0, const MeshLevel& level);

// Residual of the implicit Euler step at state u (free DOFs, mass scaled by
// 1/dt): R(u) = M(u - prev)/dt + <S(t,.,eps u), eps phi> + <b(t,.,u), phi>
//              - <f, phi> - <F, eps phi>.
std::vector<double> assemble_residual(const FEFunction& u, const FEFunction& prev, double dt,
                                      const ProblemSpec& spec, double t_k);

FEFunction newton_step_solve(const FEFunction& prev, double dt, const ProblemSpec& spec, double t_k,
                             const NewtonConfig& cfg, int* iterations_out = nullptr);

std::pair<GalerkinState, EnergyLedger> run_galerkin(const ProblemSpec& spec, const MeshLevel& level, int K_steps,
                                                    const NewtonConfig& cfg = {});

// Recomputed cumulative slack per step plus the Gronwall envelope of the
// a-priori estimate; c_poincare_korn is the (fitted) constant in
// rho_{p^-}(u) <= c rho_{p^-}(eps u) on the level.
struct CoercivityMonitor {
  std::vector<double> slack;
  double M0{0.0}, M1{0.0}, M2{0.0}, M3{0.0};
  double max_kinetic_sq{0.0};  // max_k ||u^k||_Y^2
  bool envelope_holds{false};
};
CoercivityMonitor bochner_coercivity_monitor(const GalerkinState& state, const EnergyLedger& ledger,
                                             const ProblemSpec& spec, double c_poincare_korn);

// Empirical Poincare--Korn constant on a level: max over seeded random FE
// fields of rho_{p^-}(u) / rho_{p^-}(eps u), widened by the margin.
double fit_poincare_korn_constant(const MeshLevel& level, double p_minus, int n_fields, std::uint64_t seed,
                                  double margin = 2.0);

struct ConvergenceReport {
  struct Row {
    int coarse_level;
    double diff_l2;       // ||u_{L+1} - prolong(u_L)||_{L^2(Q_T)}
    double diff_modular;  // rho_p(eps(u_{L+1} - prolong(u_L)))
  };
  std::vector<Row> rows;
  std::vector<double> proxy_norm;  // per level: ||eps u||_{p,Lux} + max_k ||u^k||_Y
  bool differences_nonincreasing{false};
};
ConvergenceReport galerkin_convergence_study(const ProblemSpec& spec, std::span<const MeshLevel* const> levels,
                                             int K_steps, const NewtonConfig& cfg = {});

// Exact discrete integration-by-parts gap (should vanish to machine epsilon):
// sum_k (u^k - u^{k-1}, v^k)_Y + sum_k (v^k - v^{k-1}, u^{k-1})_Y
//   - (u^K, v^K)_Y + (u^0, v^0)_Y.
double summation_by_parts_gap(std::span<const FEFunction> u, std::span<const FEFunction> v);

// L2(Q_T) distance of a trajectory from an analytic space-time field,
// piecewise-constant-in-time quadrature matching the implicit Euler scheme.
double trajectory_l2_error(const GalerkinState& state, const std::function<Vec2(double, Vec2)>& exact,
                           int quad_degree = 5);

}  // namespace parex
