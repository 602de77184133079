// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "parex/exponent.hpp"
#include "parex/mesh_fem.hpp"

namespace parex {

// Caratheodory flux S(t,x,A) with its declared structure constants. The
// declared (c0, c1) witness the pointwise coercivity S(t,x,A):A >= c0 |A|^p -
// c1(t,x) used by the growth/coercivity samplers and the energy envelope.
struct FluxModel {
  std::function<SymTensor2(double t, Vec2 x, const SymTensor2& A)> evaluate;
  // dS/dA as a 3x3 action on (xx, yy, xy) components; empty -> finite differences
  std::function<std::array<SymTensor2, 3>(double t, Vec2 x, const SymTensor2& A)> jacobian;
  double delta{0.0};
  double alpha{1.0};
  std::function<double(double, Vec2)> beta = [](double, Vec2) { return 0.0; };
  double c0{0.5};
  std::function<double(double, Vec2)> c1 = [](double, Vec2) { return 0.0; };
  ExponentField p;
};

enum class LowerOrderMode { zero, linear_damping, saturating };

struct LowerOrderModel {
  std::function<Vec2(double t, Vec2 x, const Vec2& a)> evaluate;
  std::function<std::array<Vec2, 2>(double t, Vec2 x, const Vec2& a)> jacobian;  // d b / d a columns
  double gamma{1.0};
  std::function<double(double, Vec2)> eta = [](double, Vec2) { return 0.0; };
  double c2{0.0};
  std::function<double(double, Vec2)> c3 = [](double, Vec2) { return 0.0; };
  ExponentField r;
  double eps_star{0.2};
  LowerOrderMode mode{LowerOrderMode::zero};
};

struct ConditionReport {
  std::string condition_id;  // S2, S3, S4, B2, B3, C3, C5, C6
  long samples{0};
  double worst_slack{0.0};
  SpaceTimePoint worst_point{};
  std::uint64_t seed{0};
};

// Canonical (p, delta)-structure instance S = (delta + |A|)^{p-2} A with
// alpha = 1, beta = 0, c0 = 1/2 and c1 = delta^{p(t,x)}.
FluxModel prototype_flux(const ExponentField& p, double delta);

// (S.4): slack = (S(A) - S(B)) : (A - B) over seeded random (t, x, A, B).
ConditionReport check_monotone(const FluxModel& S, long n_samples, std::uint64_t seed);

// (S.2) growth and (S.3) coercivity slacks over seeded random (t, x, A).
std::pair<ConditionReport, ConditionReport> check_growth_coercivity(const FluxModel& S, long n_samples,
                                                                    std::uint64_t seed);

LowerOrderModel default_lower_order(const ExponentField& r, double c2, LowerOrderMode mode);

// (B.2)/(B.3) slacks over seeded random (t, x, a).
std::pair<ConditionReport, ConditionReport> check_lower_order(const LowerOrderModel& b, long n_samples,
                                                              std::uint64_t seed);

enum class OpFamily { flux_only, lower_only, flux_plus_lower };

// Frozen constants of the (C.6) epsilon-growth template
//   |<A(t)u, v>| <= B(||u||_Y) (alpha + eps rho_p(eps u) + c rho_p(eps v)),
// with B(s) = b0 + b1 s^2. For the flux alone they follow in closed form from
// the declared structure constants and the epsilon-Young inequality; families
// containing the lower-order term carry calibrated values.
struct HiranoLandesConstants {
  double eps_c6{0.05};
  double alpha_const{0.0};
  double c_coeff{1.0};
  double bound_b0{1.0};
  double bound_b1{0.0};
};

// Exact (C.6) constants for the flux family at slice t, derived from (S.2).
HiranoLandesConstants exact_flux_c6_constants(const FluxModel& S, const MeshLevel& mesh, double t,
                                              double eps_target, int quad_degree = 2);

// Calibrates (alpha, c, B) so the (C.6) template holds with margin on the
// given fields; freeze the result and validate on fresh fields.
HiranoLandesConstants calibrate_c6_constants(OpFamily family, std::span<const FEFunction> fields,
                                             const FluxModel& S, const LowerOrderModel* b, double t,
                                             double eps_target, double margin = 1.5, int quad_degree = 2);

// Evaluates <A(t)u, u> and <A(t)u, v> by quadrature over the slice and checks
// the (C.5) coercivity and (C.6) epsilon-growth inequalities; reports worst
// slacks over the given FE fields.
std::pair<ConditionReport, ConditionReport> check_c5_c6(OpFamily family, std::span<const FEFunction> fields,
                                                        const FluxModel& S, const LowerOrderModel* b, double t,
                                                        const HiranoLandesConstants& constants,
                                                        int quad_degree = 2);

// <S(t)u, v> = int S(t,x,eps(u)) : eps(v) dx, per-triangle quadrature.
double flux_pairing(const FluxModel& S, const FEFunction& u, const FEFunction& v, double t, int quad_degree = 2);
// <B(t)u, v> = int b(t,x,u) . v dx.
double lower_pairing(const LowerOrderModel& b, const FEFunction& u, const FEFunction& v, double t,
                     int quad_degree = 2);

// Modular of the strain of u at slice t: rho_{p(t,.)}(eps(u)). The default
// samples the exponent at centroids; passing a quadrature degree samples it
// at the same nodes the pairings use, which lets pointwise structure
// inequalities transfer to the discrete slacks exactly.
double strain_modular(const FEFunction& u, const ExponentField& p, double t);
double strain_modular(const FEFunction& u, const ExponentField& p, double t, int quad_degree);

// Weighted epsilon-Young constant c_nu(eps) = (nu eps)^{1-nu'} / nu'.
double young_constant(double nu, double eps);

}  // namespace parex
