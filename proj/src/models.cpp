// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#include "parex/models.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "parex/errors.hpp"
#include "parex/spaces.hpp"

namespace parex {

FluxModel prototype_flux(const ExponentField& p, double delta) {
  if (delta < 0.0) throw BadSpec("prototype_flux: delta must be >= 0");
  if (delta == 0.0 && p.p_minus() < 2.0)
    throw SingularFlux("prototype flux with delta = 0 is singular at A = 0 for p < 2");

  FluxModel m;
  m.p = p;
  m.delta = delta;
  m.alpha = 1.0;
  m.c0 = 0.5;
  m.c1 = [delta, p](double t, Vec2 x) { return delta == 0.0 ? 0.0 : std::pow(delta, p(t, x)); };
  m.evaluate = [delta, p](double t, Vec2 x, const SymTensor2& A) {
    double pa = p(t, x);
    double n = A.norm();
    double factor = std::pow(delta + n, pa - 2.0);
    return A * factor;
  };
  m.jacobian = [delta, p](double t, Vec2 x, const SymTensor2& A) {
    double pa = p(t, x);
    double n = A.norm();
    double s = std::pow(delta + n, pa - 2.0);
    std::array<SymTensor2, 3> cols;
    const SymTensor2 basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    if (n < 1e-14) {
      for (int j = 0; j < 3; ++j) cols[j] = basis[j] * s;
      return cols;
    }
    double sp = (pa - 2.0) * std::pow(delta + n, pa - 3.0);
    for (int j = 0; j < 3; ++j) {
      // d/dA_j [(delta+|A|)^{p-2} A] = s e_j + s' (A:e_j)/|A| A
      double adotej = A.ddot(basis[j]);
      cols[j] = basis[j] * s + A * (sp * adotej / n);
    }
    return cols;
  };
  return m;
}

namespace {

struct Sampler {
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> unit{0.0, 1.0};
  std::uniform_real_distribution<double> comp{-3.0, 3.0};

  explicit Sampler(std::uint64_t seed) : rng(seed) {}

  SpaceTimePoint point(const SpaceTimeBox& box) {
    return {box.t0 + (box.t1 - box.t0) * unit(rng),
            {box.x1_min + (box.x1_max - box.x1_min) * unit(rng),
             box.x2_min + (box.x2_max - box.x2_min) * unit(rng)}};
  }
  SymTensor2 tensor() { return {comp(rng), comp(rng), comp(rng)}; }
  Vec2 vec() { return {comp(rng), comp(rng)}; }
};

}  // namespace

ConditionReport check_monotone(const FluxModel& S, long n_samples, std::uint64_t seed) {
  Sampler smp(seed);
  ConditionReport rep{"S4", n_samples, std::numeric_limits<double>::infinity(), {}, seed};
  for (long i = 0; i < n_samples; ++i) {
    SpaceTimePoint z = smp.point(S.p.domain());
    SymTensor2 A = smp.tensor(), B = smp.tensor();
    double slack = (S.evaluate(z.t, z.x, A) - S.evaluate(z.t, z.x, B)).ddot(A - B);
    if (slack < rep.worst_slack) {
      rep.worst_slack = slack;
      rep.worst_point = z;
    }
  }
  return rep;
}

std::pair<ConditionReport, ConditionReport> check_growth_coercivity(const FluxModel& S, long n_samples,
                                                                    std::uint64_t seed) {
  Sampler smp(seed);
  ConditionReport s2{"S2", n_samples, std::numeric_limits<double>::infinity(), {}, seed};
  ConditionReport s3{"S3", n_samples, std::numeric_limits<double>::infinity(), {}, seed};
  for (long i = 0; i < n_samples; ++i) {
    SpaceTimePoint z = smp.point(S.p.domain());
    SymTensor2 A = smp.tensor();
    double pa = S.p(z);
    double n = A.norm();
    SymTensor2 val = S.evaluate(z.t, z.x, A);
    double growth = S.alpha * std::pow(S.delta + n, pa - 2.0) * n + S.beta(z.t, z.x) - val.norm();
    double coercivity = val.ddot(A) - S.c0 * std::pow(S.delta + n, pa - 2.0) * n * n + S.c1(z.t, z.x);
    if (growth < s2.worst_slack) {
      s2.worst_slack = growth;
      s2.worst_point = z;
    }
    if (coercivity < s3.worst_slack) {
      s3.worst_slack = coercivity;
      s3.worst_point = z;
    }
  }
  return {s2, s3};
}

LowerOrderModel default_lower_order(const ExponentField& r, double c2, LowerOrderMode mode) {
  LowerOrderModel m;
  m.r = r;
  m.mode = mode;
  switch (mode) {
    case LowerOrderMode::zero:
      m.evaluate = [](double, Vec2, const Vec2&) { return Vec2{0, 0}; };
      m.jacobian = [](double, Vec2, const Vec2&) { return std::array<Vec2, 2>{Vec2{0, 0}, Vec2{0, 0}}; };
      m.gamma = 1.0;
      m.c2 = 0.0;
      break;
    case LowerOrderMode::linear_damping:
      m.evaluate = [c2](double, Vec2, const Vec2& a) { return a * c2; };
      m.jacobian = [c2](double, Vec2, const Vec2&) { return std::array<Vec2, 2>{Vec2{c2, 0}, Vec2{0, c2}}; };
      m.gamma = std::max(1.0, c2);
      m.c2 = c2;
      break;
    case LowerOrderMode::saturating:
      m.evaluate = [r](double t, Vec2 x, const Vec2& a) {
        return a * std::pow(1.0 + a.norm(), r(t, x) - 2.0);
      };
      m.jacobian = [r](double t, Vec2 x, const Vec2& a) {
        double rr = r(t, x);
        double n = a.norm();
        double s = std::pow(1.0 + n, rr - 2.0);
        std::array<Vec2, 2> cols{Vec2{s, 0}, Vec2{0, s}};
        if (n > 1e-14) {
          double sp = (rr - 2.0) * std::pow(1.0 + n, rr - 3.0) / n;
          cols[0] += a * (sp * a.x);
          cols[1] += a * (sp * a.y);
        }
        return cols;
      };
      m.gamma = 1.0;
      m.c2 = 0.0;  // b(a).a = |a|^2 (1+|a|)^{r-2} >= 0
      break;
  }
  return m;
}

std::pair<ConditionReport, ConditionReport> check_lower_order(const LowerOrderModel& b, long n_samples,
                                                              std::uint64_t seed) {
  Sampler smp(seed);
  ConditionReport b2{"B2", n_samples, std::numeric_limits<double>::infinity(), {}, seed};
  ConditionReport b3{"B3", n_samples, std::numeric_limits<double>::infinity(), {}, seed};
  for (long i = 0; i < n_samples; ++i) {
    SpaceTimePoint z = smp.point(b.r.domain());
    Vec2 a = smp.vec();
    double rr = b.r(z);
    Vec2 val = b.evaluate(z.t, z.x, a);
    double growth = b.gamma * std::pow(1.0 + a.norm(), rr - 1.0) + b.eta(z.t, z.x) - val.norm();
    double sign = val.dot(a) - b.c2 * a.dot(a) + b.c3(z.t, z.x);
    if (growth < b2.worst_slack) {
      b2.worst_slack = growth;
      b2.worst_point = z;
    }
    if (sign < b3.worst_slack) {
      b3.worst_slack = sign;
      b3.worst_point = z;
    }
  }
  return {b2, b3};
}

double flux_pairing(const FluxModel& S, const FEFunction& u, const FEFunction& v, double t, int quad_degree) {
  const MeshLevel& m = u.mesh();
  const TriQuadRule& rule = tri_rule(quad_degree);
  double acc = 0.0;
  for (int k = 0; k < m.n_triangles(); ++k) {
    TriGeometry g = tri_geometry(m, k);
    SymTensor2 eu{};
    SymTensor2 ev{};
    for (int i = 0; i < 3; ++i) {
      Vec2 ui = u.value(g.v[i]), vi = v.value(g.v[i]);
      eu += SymTensor2{ui.x * g.grad[i].x, ui.y * g.grad[i].y, 0.5 * (ui.x * g.grad[i].y + ui.y * g.grad[i].x)};
      ev += SymTensor2{vi.x * g.grad[i].x, vi.y * g.grad[i].y, 0.5 * (vi.x * g.grad[i].y + vi.y * g.grad[i].x)};
    }
    for (std::size_t q = 0; q < rule.bary.size(); ++q) {
      const auto& l = rule.bary[q];
      Vec2 x = m.vertices[g.v[0]] * l[0] + m.vertices[g.v[1]] * l[1] + m.vertices[g.v[2]] * l[2];
      SymTensor2 Sval = S.evaluate(t, x, eu);
      if (!std::isfinite(Sval.xx) || !std::isfinite(Sval.yy) || !std::isfinite(Sval.xy))
        throw FluxEvalError("flux produced NaN/inf at quadrature point");
      acc += g.area * rule.weights[q] * Sval.ddot(ev);
    }
  }
  return acc;
}

double lower_pairing(const LowerOrderModel& b, const FEFunction& u, const FEFunction& v, double t,
                     int quad_degree) {
  const MeshLevel& m = u.mesh();
  const TriQuadRule& rule = tri_rule(quad_degree);
  double acc = 0.0;
  for (int k = 0; k < m.n_triangles(); ++k) {
    const auto& tri = m.triangles[k];
    double A = m.area(k);
    for (std::size_t q = 0; q < rule.bary.size(); ++q) {
      const auto& l = rule.bary[q];
      Vec2 x = m.vertices[tri.v[0]] * l[0] + m.vertices[tri.v[1]] * l[1] + m.vertices[tri.v[2]] * l[2];
      Vec2 uval = u.value(tri.v[0]) * l[0] + u.value(tri.v[1]) * l[1] + u.value(tri.v[2]) * l[2];
      Vec2 vval = v.value(tri.v[0]) * l[0] + v.value(tri.v[1]) * l[1] + v.value(tri.v[2]) * l[2];
      acc += A * rule.weights[q] * b.evaluate(t, x, uval).dot(vval);
    }
  }
  return acc;
}

double strain_modular(const FEFunction& u, const ExponentField& p, double t) {
  return modular(symmetric_gradient(u, t), p).value;
}

double strain_modular(const FEFunction& u, const ExponentField& p, double t, int quad_degree) {
  const MeshLevel& m = u.mesh();
  const TriQuadRule& rule = tri_rule(quad_degree);
  DiscreteField eps = symmetric_gradient(u, t);  // constant per triangle
  double acc = 0.0;
  for (int k = 0; k < m.n_triangles(); ++k) {
    const auto& tri = m.triangles[k];
    double A = m.area(k);
    double a = eps.abs_at(k);
    if (a == 0.0) continue;
    for (std::size_t q = 0; q < rule.bary.size(); ++q) {
      const auto& l = rule.bary[q];
      Vec2 x = m.vertices[tri.v[0]] * l[0] + m.vertices[tri.v[1]] * l[1] + m.vertices[tri.v[2]] * l[2];
      acc += A * rule.weights[q] * std::exp(p(t, x) * std::log(a));
    }
  }
  return acc;
}

double young_constant(double nu, double eps) {
  double nu_c = nu / (nu - 1.0);
  return std::pow(nu * eps, 1.0 - nu_c) / nu_c;
}

namespace {

double slice_integral(const MeshLevel& mesh, double t, int quad_degree,
                      const std::function<double(double, Vec2)>& f) {
  double acc = 0.0;
  const TriQuadRule& rule = tri_rule(quad_degree);
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    const auto& tri = mesh.triangles[k];
    double A = mesh.area(k);
    for (std::size_t q = 0; q < rule.bary.size(); ++q) {
      const auto& l = rule.bary[q];
      Vec2 x = mesh.vertices[tri.v[0]] * l[0] + mesh.vertices[tri.v[1]] * l[1] + mesh.vertices[tri.v[2]] * l[2];
      acc += A * rule.weights[q] * f(t, x);
    }
  }
  return acc;
}

double family_pairing(OpFamily family, const FluxModel& S, const LowerOrderModel* b, const FEFunction& u,
                      const FEFunction& v, double t, int quad_degree) {
  double val = 0.0;
  if (family != OpFamily::lower_only) val += flux_pairing(S, u, v, t, quad_degree);
  if (family != OpFamily::flux_only) val += lower_pairing(*b, u, v, t, quad_degree);
  return val;
}

}  // namespace

HiranoLandesConstants exact_flux_c6_constants(const FluxModel& S, const MeshLevel& mesh, double t,
                                              double eps_target, int quad_degree) {
  const ExponentField& p = S.p;
  double p_minus = p.p_minus(), p_plus = p.p_plus();
  double pc_minus = conjugate(p_plus);  // (p^+)'
  double pc_plus = conjugate(p_minus);  // (p^-)'

  // |S|^{p'} <= 2^{(p^-)'} [ alpha^{(p^-)'} 2^{p^+} (delta^p + |eps u|^p) + beta^{p'} ],
  // then epsilon-Young with exponent pair (p', p).
  double growth_amp = std::pow(2.0, pc_plus) * std::pow(S.alpha, pc_plus) * std::pow(2.0, p_plus);
  double eps_tilde = std::min(0.5 / pc_minus, eps_target / growth_amp);

  HiranoLandesConstants c;
  c.eps_c6 = eps_tilde * growth_amp;
  c.c_coeff = std::pow(pc_minus * eps_tilde, 1.0 - p_plus) / p_minus;
  double rho_delta =
      slice_integral(mesh, t, quad_degree, [&](double tt, Vec2 xx) { return std::pow(S.delta, p(tt, xx)); });
  double rho_beta_conj = slice_integral(mesh, t, quad_degree, [&](double tt, Vec2 xx) {
    double bv = S.beta(tt, xx);
    return bv == 0.0 ? 0.0 : std::pow(bv, conjugate(p(tt, xx)));
  });
  c.alpha_const = eps_tilde * std::pow(2.0, pc_plus) *
                  (std::pow(S.alpha, pc_plus) * std::pow(2.0, p_plus) * rho_delta + rho_beta_conj);
  c.bound_b0 = 1.0;
  c.bound_b1 = 0.0;
  return c;
}

HiranoLandesConstants calibrate_c6_constants(OpFamily family, std::span<const FEFunction> fields,
                                             const FluxModel& S, const LowerOrderModel* b, double t,
                                             double eps_target, double margin, int quad_degree) {
  if (fields.empty()) throw BadSpec("calibrate_c6_constants: need calibration fields");
  HiranoLandesConstants c = exact_flux_c6_constants(S, fields[0].mesh(), t, eps_target, quad_degree);
  if (family == OpFamily::flux_only) return c;

  // Fit the smallest c_coeff and quadratic norm bound that dominate the
  // calibration pairs, then widen by the margin.
  double need_c = c.c_coeff;
  double need_b1 = 0.0;
  for (const FEFunction& u : fields) {
    double rho_u = strain_modular(u, S.p, t, quad_degree);
    double u_y = std::sqrt(l2_inner(u, u));
    for (const FEFunction& v : fields) {
      double rho_v = strain_modular(v, S.p, t, quad_degree);
      double lhs = std::abs(family_pairing(family, S, b, u, v, t, quad_degree));
      double base = c.alpha_const + c.eps_c6 * rho_u + c.c_coeff * rho_v;
      if (lhs <= base) continue;
      // attribute the excess to c_coeff first, then to the norm bound
      if (rho_v > 1e-12) need_c = std::max(need_c, (lhs - c.alpha_const - c.eps_c6 * rho_u) / rho_v);
      if (u_y > 1e-12) need_b1 = std::max(need_b1, (lhs / base - 1.0) / (u_y * u_y));
    }
  }
  c.c_coeff = margin * need_c;
  c.bound_b1 = margin * need_b1;
  return c;
}

std::pair<ConditionReport, ConditionReport> check_c5_c6(OpFamily family, std::span<const FEFunction> fields,
                                                        const FluxModel& S, const LowerOrderModel* b, double t,
                                                        const HiranoLandesConstants& constants,
                                                        int quad_degree) {
  if ((family == OpFamily::lower_only || family == OpFamily::flux_plus_lower) && b == nullptr)
    throw BadSpec("check_c5_c6: lower-order model required for this family");

  ConditionReport c5{"C5", static_cast<long>(fields.size()), std::numeric_limits<double>::infinity(), {}, 0};
  ConditionReport c6{"C6", static_cast<long>(fields.size() * fields.size()),
                     std::numeric_limits<double>::infinity(), {}, 0};
  if (fields.empty()) {
    c5.worst_slack = 0.0;
    c6.worst_slack = 0.0;
    return {c5, c6};
  }
  const MeshLevel& mesh = fields[0].mesh();
  const ExponentField& p = S.p;

  double c2_of_t = slice_integral(mesh, t, quad_degree, S.c1);
  if (family != OpFamily::flux_only) c2_of_t += slice_integral(mesh, t, quad_degree, b->c3);

  for (const FEFunction& u : fields) {
    double rho_eps_u = strain_modular(u, p, t, quad_degree);
    double uu = family_pairing(family, S, b, u, u, t, quad_degree);
    // (C.5): <A(t)u, u> >= c0 rho_p(eps u) - c1(t) ||u||_Y^2 - c2(t); the
    // declared models have c1(t) = 0 (b.c2 >= 0 only strengthens the bound).
    double slack5 = uu - S.c0 * rho_eps_u + c2_of_t;
    if (slack5 < c5.worst_slack) {
      c5.worst_slack = slack5;
      c5.worst_point = {t, {}};
    }
  }

  for (const FEFunction& u : fields) {
    double rho_eps_u = strain_modular(u, p, t, quad_degree);
    double u_y = std::sqrt(l2_inner(u, u));
    double script_b = constants.bound_b0 + constants.bound_b1 * u_y * u_y;
    for (const FEFunction& v : fields) {
      double rho_eps_v = strain_modular(v, p, t, quad_degree);
      double lhs = std::abs(family_pairing(family, S, b, u, v, t, quad_degree));
      double rhs =
          script_b * (constants.alpha_const + constants.eps_c6 * rho_eps_u + constants.c_coeff * rho_eps_v);
      double slack = rhs - lhs;
      if (slack < c6.worst_slack) {
        c6.worst_slack = slack;
        c6.worst_point = {t, {}};
      }
    }
  }
  return {c5, c6};
}

}  // namespace parex
