// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#include "parex/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "parex/errors.hpp"
#include "parex/spaces.hpp"

namespace parex {

namespace {

double mollifier_raw(double s) {  // exp(-1/(1-s^2)) on |s| < 1
  if (s >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

double mollifier_raw_prime(double s) {
  if (s >= 1.0) return 0.0;
  double d = 1.0 - s * s;
  return mollifier_raw(s) * (-2.0 * s / (d * d));
}

}  // namespace

RadialCounterexample::RadialCounterexample(const CounterexampleSpec& spec, int radial_samples) : spec_(spec) {
  if (!(spec.plateau_radius > 0.0) || !(spec.mollifier_eps > 0.0))
    throw BadSpec("counterexample: radii must be positive");
  if (spec.plateau_radius + spec.mollifier_eps > 1.0 + 1e-12)
    throw BadSpec("counterexample: plateau + mollifier support must stay inside the unit indicator");
  if (1.0 + spec.mollifier_eps > spec.omega_radius + 1e-12)
    throw BadSpec("counterexample: support of u must stay inside Omega");
  if (!(spec.p_minus > 1.0) || !(spec.p_plus > spec.p_minus))
    throw BadSpec("counterexample: need 1 < p_minus < p_plus");

  // normalization of omega so that chi * omega has plateau value exactly 1
  auto [gx, gw] = gauss_legendre_01(512);
  double mass = 0.0;
  for (std::size_t i = 0; i < gx.size(); ++i) {
    double s = gx[i];
    mass += gw[i] * s * mollifier_raw(s);
  }
  mass *= 2.0 * M_PI;
  mollifier_norm_ = 1.0 / mass;

  const double eps = spec.mollifier_eps;
  grid_.resize(radial_samples);
  eta_.resize(radial_samples);
  deta_.resize(radial_samples);
  for (int i = 0; i < radial_samples; ++i)
    grid_[i] = spec.omega_radius * static_cast<double>(i) / (radial_samples - 1);

  // reduced 1D convolution: the angular window where |r e1 - z| <= 1 has
  // measure 2 acos(c) with c = (r^2 + rho^2 - 1)/(2 r rho)
  for (int i = 0; i < radial_samples; ++i) {
    double r = grid_[i];
    double acc = 0.0, dacc = 0.0;
    for (std::size_t qi = 0; qi < gx.size(); ++qi) {
      double rho = eps * gx[qi];
      double w = eps * gw[qi];
      double omega_val = mollifier_norm_ / (eps * eps) * mollifier_raw(rho / eps);
      double window;
      double c;
      if (r < 1e-14) {
        window = rho <= 1.0 ? 2.0 * M_PI : 0.0;
        c = -1.0;
      } else if (rho < 1e-14) {
        window = r <= 1.0 ? 2.0 * M_PI : 0.0;
        c = r <= 1.0 ? -1.0 : 1.0;
      } else {
        c = (r * r + rho * rho - 1.0) / (2.0 * r * rho);
        window = c <= -1.0 ? 2.0 * M_PI : (c >= 1.0 ? 0.0 : 2.0 * std::acos(c));
      }
      acc += w * omega_val * window * rho;
      // derivative route: grad(chi * omega) = chi * grad(omega); the angular
      // cosine integral over the window is 2 sqrt(1 - c^2)
      double omega_prime = mollifier_norm_ / (eps * eps * eps) * mollifier_raw_prime(rho / eps);
      double cosint = (c > -1.0 && c < 1.0) ? 2.0 * std::sqrt(1.0 - c * c) : 0.0;
      dacc += w * omega_prime * cosint * rho;
    }
    eta_[i] = acc;
    deta_[i] = dacc;
  }
}

namespace {

double lerp_on_grid(const std::vector<double>& grid, const std::vector<double>& vals, double r) {
  if (r <= grid.front()) return vals.front();
  if (r >= grid.back()) return vals.back();
  double h = grid[1] - grid[0];
  auto i = static_cast<std::size_t>((r - grid.front()) / h);
  if (i + 1 >= grid.size()) i = grid.size() - 2;
  double s = (r - grid[i]) / h;
  return vals[i] * (1.0 - s) + vals[i + 1] * s;
}

}  // namespace

double RadialCounterexample::eta(double r) const { return lerp_on_grid(grid_, eta_, std::abs(r)); }
double RadialCounterexample::eta_prime(double r) const { return lerp_on_grid(grid_, deta_, std::abs(r)); }

double RadialCounterexample::exponent(double r) const {
  r = std::abs(r);
  const double ramp_end = 0.9;
  if (r <= spec_.plateau_radius) return spec_.p_plus;
  if (r >= ramp_end) return spec_.p_minus;
  double x = (r - spec_.plateau_radius) / (ramp_end - spec_.plateau_radius);
  double s = 1.0 - std::pow(1.0 - x, 8.0);  // steep near the plateau edge
  return spec_.p_plus - (spec_.p_plus - spec_.p_minus) * s;
}

double RadialCounterexample::max_grad() const {
  double m = 0.0;
  for (double d : deta_) m = std::max(m, std::abs(d));
  return m;
}

double RadialCounterexample::arg_max_grad() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i < deta_.size(); ++i)
    if (std::abs(deta_[i]) > std::abs(deta_[best])) best = i;
  return grid_[best];
}

ExponentField RadialCounterexample::exponent_field() const {
  double R = spec_.omega_radius;
  SpaceTimeBox box{0.0, spec_.time_horizon, -R, R, -R, R};
  auto self = *this;  // value copy keeps the field self-contained
  return ExponentField([self](double, Vec2 x) { return self.exponent(x.norm()); }, box,
                       SampleLattice::tensor(box, 4, 64, 64));
}

double RadialCounterexample::time_integral(double p, double tau) const {
  // int_tau^T t^{p * phi_exponent} dt, closed form
  double T = spec_.time_horizon;
  double a = 1.0 + p * spec_.phi_exponent;
  if (std::abs(a) < 1e-14) return std::log(T / tau);
  return (std::pow(T, a) - std::pow(tau, a)) / a;
}

std::vector<RadialCounterexample::TruncationRow> RadialCounterexample::truncation_table(
    std::span<const double> taus) const {
  std::vector<TruncationRow> out;
  out.reserve(taus.size());
  double h = grid_[1] - grid_[0];
  for (double tau : taus) {
    TruncationRow row{tau, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      double r = grid_[i];
      double w = 2.0 * M_PI * r * h * (i == 0 || i + 1 == grid_.size() ? 0.5 : 1.0);
      double p = exponent(r);
      double e = eta_[i], g = std::abs(deta_[i]);
      if (e > 0.0) {
        row.rho_u += w * std::pow(e, p) * time_integral(p, tau);
        row.rho_u_pminus += w * std::pow(e, spec_.p_minus) * time_integral(spec_.p_minus, tau);
      }
      if (g > 0.0) row.rho_grad += w * std::pow(g, p) * time_integral(p, tau);
    }
    out.push_back(row);
  }
  return out;
}

RadialCounterexample::Slice RadialCounterexample::slice(double t, double eps_star) const {
  Slice s{t, 0.0, 0.0, 0.0, 0.0};
  double h = grid_[1] - grid_[0];
  double phi = std::pow(t, spec_.phi_exponent);
  // angular factor of |eps(u)| = |eta'| sqrt(cos^2 + sin^2/2): integrate the
  // p-th power over the circle
  auto [ax, aw] = gauss_legendre_01(64);
  double y2 = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    double r = grid_[i];
    double w = 2.0 * M_PI * r * h * (i == 0 || i + 1 == grid_.size() ? 0.5 : 1.0);
    double p = exponent(r);
    double e = eta_[i], g = std::abs(deta_[i]);
    if (e > 0.0) {
      s.rho_u += w * std::pow(phi * e, p);
      double pstar = parabolic_star(p, 2) - eps_star;
      s.rho_u_star += w * std::pow(phi * e, pstar);
      y2 += w * phi * phi * e * e;
    }
    if (g > 0.0) {
      double ang = 0.0;
      for (std::size_t q = 0; q < ax.size(); ++q) {
        double th = 2.0 * M_PI * ax[q];
        double cc = std::cos(th), ss = std::sin(th);
        ang += aw[q] * std::pow(cc * cc + 0.5 * ss * ss, p / 2.0);
      }
      s.rho_eps += w * ang * std::pow(phi * g, p);
    }
  }
  s.y_norm = std::sqrt(y2);
  return s;
}

std::vector<RadialCounterexample::ProfileRow> RadialCounterexample::profile(int rows) const {
  std::vector<ProfileRow> out;
  out.reserve(rows);
  for (int i = 0; i < rows; ++i) {
    double r = spec_.omega_radius * static_cast<double>(i) / (rows - 1);
    out.push_back({r, eta(r), std::abs(eta_prime(r)), exponent(r)});
  }
  return out;
}

std::vector<SliceSample> random_trajectory_slices(const MeshLevel& mesh, const ExponentField& p,
                                                  double eps_star, int n_trajectories, int slices_each,
                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::uniform_real_distribution<double> freq(0.5, 3.0);

  const SpaceTimeBox& box = p.domain();
  ExponentField p_star([p, eps_star](double t, Vec2 x) { return parabolic_star(p(t, x), 2) - eps_star; },
                       box, SampleLattice::tensor(box, 4, 16, 16));

  std::vector<SliceSample> out;
  out.reserve(static_cast<std::size_t>(n_trajectories) * slices_each);
  for (int tr = 0; tr < n_trajectories; ++tr) {
    FEFunction ua(mesh), ub(mesh);
    for (int i = 0; i < mesh.n_vertices(); ++i) {
      if (mesh.boundary[i]) continue;
      ua.set_value(i, {dist(rng), dist(rng)});
      ub.set_value(i, {dist(rng), dist(rng)});
    }
    double w1 = freq(rng), w2 = freq(rng);
    for (int si = 0; si < slices_each; ++si) {
      double t = box.t0 + (box.t1 - box.t0) * (si + 0.5) / slices_each;
      FEFunction u = ua.scaled(std::cos(w1 * t));
      u += ub.scaled(std::sin(w2 * t));
      SliceSample s;
      DiscreteField uf = fe_vector_field(u, 2, t);
      s.rho_u = modular(uf, p).value;
      s.rho_u_star = modular(uf, p_star).value;
      s.rho_eps = modular(symmetric_gradient(u, t), p).value;
      s.y_norm = std::sqrt(l2_inner(u, u));
      out.push_back(s);
    }
  }
  return out;
}

namespace {

double repair_sup_ratio(std::span<const SliceSample> samples, double gamma) {
  double worst = 0.0;
  for (const auto& s : samples)
    worst = std::max(worst, s.rho_u / (1.0 + s.rho_eps + std::pow(s.y_norm, gamma)));
  return worst;
}

double interp_sup_ratio(std::span<const SliceSample> samples, double gamma) {
  double worst = 0.0;
  for (const auto& s : samples) {
    double yg = std::pow(s.y_norm, gamma);
    worst = std::max(worst, s.rho_u_star / ((1.0 + s.rho_eps + yg) * (1.0 + yg)));
  }
  return worst;
}

constexpr double kGammaGrid[] = {2.0, 2.5, 3.0, 4.0, 6.0, 8.0};

}  // namespace

RepairConstants fit_repair_constants(std::span<const SliceSample> calibration, double margin) {
  RepairConstants best{0.0, 2.0};
  double best_sup = std::numeric_limits<double>::infinity();
  for (double g : kGammaGrid) {
    double sup = repair_sup_ratio(calibration, g);
    if (sup < best_sup) {
      best_sup = sup;
      best.gamma = g;
    }
  }
  best.c = margin * best_sup;
  return best;
}

InequalityReport poincare_repair_check(std::span<const SliceSample> validation, const RepairConstants& frozen) {
  double sup = repair_sup_ratio(validation, frozen.gamma);
  return {"poincare_repair", static_cast<long>(validation.size()), frozen.c, frozen.gamma, sup,
          sup <= frozen.c};
}

RepairConstants fit_interpolation_constants(std::span<const SliceSample> calibration, double margin) {
  RepairConstants best{0.0, 2.0};
  double best_sup = std::numeric_limits<double>::infinity();
  for (double g : kGammaGrid) {
    double sup = interp_sup_ratio(calibration, g);
    if (sup < best_sup) {
      best_sup = sup;
      best.gamma = g;
    }
  }
  best.c = margin * best_sup;
  return best;
}

InequalityReport variable_interpolation_check(std::span<const SliceSample> validation,
                                              const RepairConstants& frozen) {
  double sup = interp_sup_ratio(validation, frozen.gamma);
  return {"variable_interpolation", static_cast<long>(validation.size()), frozen.c, frozen.gamma, sup,
          sup <= frozen.c};
}

double fe_lp_norm(const FEFunction& u, double s, int quad_degree) {
  const MeshLevel& mesh = u.mesh();
  const TriQuadRule& rule = tri_rule(quad_degree);
  double acc = 0.0;
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    const auto& tri = mesh.triangles[k];
    double A = mesh.area(k);
    for (std::size_t q = 0; q < rule.bary.size(); ++q) {
      const auto& l = rule.bary[q];
      Vec2 val = u.value(tri.v[0]) * l[0] + u.value(tri.v[1]) * l[1] + u.value(tri.v[2]) * l[2];
      double n = val.norm();
      if (n > 0.0) acc += A * rule.weights[q] * std::pow(n, s);
    }
  }
  return std::pow(acc, 1.0 / s);
}

double fe_grad_lp_norm(const FEFunction& u, double s) {
  DiscreteField g = gradient_magnitude(u);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double v = g.scalar_at(i);
    if (v > 0.0) acc += g.weights()[i] * std::pow(v, s);
  }
  return std::pow(acc, 1.0 / s);
}

double fe_strain_lp_norm(const FEFunction& u, double s) {
  DiscreteField e = symmetric_gradient(u);
  double acc = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    double v = e.abs_at(i);
    if (v > 0.0) acc += e.weights()[i] * std::pow(v, s);
  }
  return std::pow(acc, 1.0 / s);
}

double korn_worst_ratio(std::span<const FEFunction> fields, double s) {
  double worst = 0.0;
  for (const auto& u : fields) {
    double den = fe_lp_norm(u, s) + fe_strain_lp_norm(u, s);
    if (den < 1e-300) continue;
    worst = std::max(worst, fe_grad_lp_norm(u, s) / den);
  }
  return worst;
}

InequalityReport korn_check(std::span<const FEFunction> fields, double s, double frozen_c) {
  double sup = korn_worst_ratio(fields, s);
  return {"korn_s=" + std::to_string(s), static_cast<long>(fields.size()), frozen_c, 0.0, sup, sup <= frozen_c};
}

double gn_worst_ratio(std::span<const FEFunction> fields, double s, double r, double theta) {
  double inv_q = theta * (1.0 / r - 0.5) + (1.0 - theta) / s;
  if (!(inv_q > 0.0)) throw BadSpec("gn_check: exponent relation gives q <= 0");
  double q = 1.0 / inv_q;
  double worst = 0.0;
  for (const auto& u : fields) {
    double ns = fe_lp_norm(u, s);
    double nq = fe_lp_norm(u, q);
    double ng = fe_grad_lp_norm(u, r);
    double den = std::pow(ng, theta) * std::pow(ns, 1.0 - theta) + ns;
    if (den < 1e-300) continue;
    worst = std::max(worst, nq / den);
  }
  return worst;
}

InequalityReport gn_check(std::span<const FEFunction> fields, double s, double r, double theta,
                          double frozen_c) {
  double sup = gn_worst_ratio(fields, s, r, theta);
  return {"gagliardo_nirenberg", static_cast<long>(fields.size()), frozen_c, theta, sup, sup <= frozen_c};
}

}  // namespace parex
