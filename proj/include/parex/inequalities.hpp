// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "parex/exponent.hpp"
#include "parex/mesh_fem.hpp"

namespace parex {

// Geometry and exponents of the Poincare-failure construction: a mollified
// indicator u = e1 (chi_{B_1} * omega_eps) on Omega = B_{omega_radius}, an
// exponent equal to p_plus on the plateau and p_minus on the gradient annulus,
// and the time profile phi(t) = t^{phi_exponent}.
struct CounterexampleSpec {
  double omega_radius{2.5};
  double plateau_radius{0.6};
  double mollifier_eps{0.4};
  double p_minus{1.1};
  double p_plus{2.0};
  double phi_exponent{-0.5};  // -1/p_plus
  double time_horizon{1.0};
};

// Radial realization on a dense 1D grid; rotational symmetry makes every
// space integral one-dimensional and the time integrals close in closed form,
// so truncations can be evaluated at arbitrary depth.
class RadialCounterexample {
 public:
  explicit RadialCounterexample(const CounterexampleSpec& spec, int radial_samples = 4096);

  const CounterexampleSpec& spec() const { return spec_; }

  double eta(double r) const;        // plateau value 1, support radius 1 + eps
  double eta_prime(double r) const;  // analytic convolution derivative
  double exponent(double r) const;   // radial p profile
  double max_grad() const;           // max |eta'| over the grid
  double arg_max_grad() const;

  ExponentField exponent_field() const;  // for solver / structure sweeps

  struct TruncationRow {
    double tau;
    double rho_u;         // rho_p(phi_tau u)
    double rho_grad;      // rho_p(phi_tau grad u)
    double rho_u_pminus;  // rho_{p^-}(phi_tau u)
  };
  std::vector<TruncationRow> truncation_table(std::span<const double> taus) const;

  // Per-time-slice quantities of u(t) = phi(t) eta e1.
  struct Slice {
    double t;
    double rho_u;        // rho_{p(t,.)}(u(t))
    double rho_eps;      // rho_{p(t,.)}(eps(u)(t))
    double rho_u_star;   // rho_{p_*(t,.) - eps_star}(u(t))
    double y_norm;       // ||u(t)||_Y
  };
  Slice slice(double t, double eps_star) const;

  // Radial profile table for external plotting: (r, eta, |grad eta|, p).
  struct ProfileRow {
    double r, eta, grad, p;
  };
  std::vector<ProfileRow> profile(int rows = 512) const;

 private:
  CounterexampleSpec spec_;
  std::vector<double> grid_;   // radii
  std::vector<double> eta_;    // eta on the grid
  std::vector<double> deta_;   // analytic derivative on the grid
  double mollifier_norm_;      // normalization of omega

  double time_integral(double p, double tau) const;  // int_tau^T t^{p*phi_exponent} dt
};

struct InequalityReport {
  std::string name;
  long samples{0};
  double fitted_c{0.0};
  double fitted_gamma{0.0};
  double worst_ratio{0.0};
  bool pass{false};
};

// One time slice of a trajectory, reduced to the scalars the slice-wise
// inequalities consume.
struct SliceSample {
  double rho_u{0.0};       // rho_{p(t,.)}(u(t))
  double rho_eps{0.0};     // rho_{p(t,.)}(eps(u)(t))
  double rho_u_star{0.0};  // rho_{p_*(t,.)-eps}(u(t))
  double y_norm{0.0};      // ||u(t)||_Y
};

// Slice samples of random FE trajectories u(t) = cos(w1 t) uA + sin(w2 t) uB.
std::vector<SliceSample> random_trajectory_slices(const MeshLevel& mesh, const ExponentField& p,
                                                  double eps_star, int n_trajectories, int slices_each,
                                                  std::uint64_t seed);

struct RepairConstants {
  double c{1.0};
  double gamma{2.0};
};

// Calibrate the slice-wise repaired Poincare inequality
//   rho_p(u) <= c [1 + rho_p(eps u) + ||u||_Y^gamma]
// on the given samples (gamma over a small grid, then c as the widened sup).
RepairConstants fit_repair_constants(std::span<const SliceSample> calibration, double margin = 1.5);
InequalityReport poincare_repair_check(std::span<const SliceSample> validation, const RepairConstants& frozen);

// Same protocol for the variable interpolation inequality
//   rho_{p_*-eps}(u) <= c_eps [1 + rho_p(eps u) + ||u||_Y^g](1 + ||u||_Y^g).
RepairConstants fit_interpolation_constants(std::span<const SliceSample> calibration, double margin = 1.5);
InequalityReport variable_interpolation_check(std::span<const SliceSample> validation,
                                              const RepairConstants& frozen);

// Korn: ||grad u||_{L^s} <= c (||u||_{L^s} + ||eps u||_{L^s}) on FE fields.
double korn_worst_ratio(std::span<const FEFunction> fields, double s);
InequalityReport korn_check(std::span<const FEFunction> fields, double s, double frozen_c);

// Gagliardo-Nirenberg with 1/q = theta (1/r - 1/2) + (1-theta)/s (d = 2):
// ratio ||u||_q / (||grad u||_r^theta ||u||_s^{1-theta} + ||u||_s).
double gn_worst_ratio(std::span<const FEFunction> fields, double s, double r, double theta);
InequalityReport gn_check(std::span<const FEFunction> fields, double s, double r, double theta, double frozen_c);

// Constant-exponent L^s quantities of an FE field (quadrature).
double fe_lp_norm(const FEFunction& u, double s, int quad_degree = 5);
double fe_grad_lp_norm(const FEFunction& u, double s);   // piecewise-constant gradient, exact
double fe_strain_lp_norm(const FEFunction& u, double s);

}  // namespace parex
