// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#include "parex/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parex/errors.hpp"

namespace parex {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_01(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    // initial guess on [-1,1], then Newton on P_n
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = 0.5 * (1.0 - z);  // map to [0,1], ascending later
    w[i] = 1.0 / ((1.0 - z * z) * pp * pp);
  }
  std::vector<std::pair<double, double>> xw(n);
  for (int i = 0; i < n; ++i) xw[i] = {x[i], w[i]};
  std::sort(xw.begin(), xw.end());
  for (int i = 0; i < n; ++i) {
    x[i] = xw[i].first;
    w[i] = xw[i].second;
  }
  return {x, w};
}

SampleLattice SampleLattice::tensor(const SpaceTimeBox& box, int nt, int nx1, int nx2) {
  std::vector<SpaceTimePoint> pts;
  pts.reserve(static_cast<std::size_t>(nt) * nx1 * nx2);
  auto coord = [](double lo, double hi, int i, int n) {
    return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  };
  for (int it = 0; it < nt; ++it)
    for (int i1 = 0; i1 < nx1; ++i1)
      for (int i2 = 0; i2 < nx2; ++i2)
        pts.push_back({coord(box.t0, box.t1, it, nt),
                       {coord(box.x1_min, box.x1_max, i1, nx1), coord(box.x2_min, box.x2_max, i2, nx2)}});
  return SampleLattice(std::move(pts));
}

SampleLattice SampleLattice::tensor_interior(const SpaceTimeBox& box, int nt, int nx1, int nx2) {
  std::vector<SpaceTimePoint> pts;
  pts.reserve(static_cast<std::size_t>(nt) * nx1 * nx2);
  auto coord = [](double lo, double hi, int i, int n) { return lo + (hi - lo) * (i + 0.5) / n; };
  for (int it = 0; it < nt; ++it)
    for (int i1 = 0; i1 < nx1; ++i1)
      for (int i2 = 0; i2 < nx2; ++i2)
        pts.push_back({coord(box.t0, box.t1, it, nt),
                       {coord(box.x1_min, box.x1_max, i1, nx1), coord(box.x2_min, box.x2_max, i2, nx2)}});
  return SampleLattice(std::move(pts));
}

ExponentField::ExponentField() : ExponentField([](double, Vec2) { return 2.0; }, SpaceTimeBox::unit_cylinder()) {}

ExponentField::ExponentField(Eval eval, SpaceTimeBox domain, const SampleLattice& lattice)
    : eval_(std::move(eval)), domain_(domain) {
  if (lattice.empty()) throw DegenerateExponent("exponent lattice is empty");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& z : lattice.points()) {
    double v = eval_(z.t, z.x);
    if (!std::isfinite(v)) throw DegenerateExponent("exponent evaluates to NaN/inf on the lattice");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo <= 1.0) throw DegenerateExponent("exponent infimum <= 1 on the sample lattice");
  p_minus_ = lo;
  p_plus_ = hi;
}

ExponentField::ExponentField(Eval eval, SpaceTimeBox domain)
    : ExponentField(std::move(eval), domain, SampleLattice::tensor(domain, 64, 64, 64)) {}

ExponentField ExponentField::constant(double value, SpaceTimeBox domain) {
  return ExponentField([value](double, Vec2) { return value; }, domain, SampleLattice::tensor(domain, 2, 2, 2));
}

ExponentField ExponentField::affine(double a, double b1, double b2, double bt, SpaceTimeBox domain) {
  return ExponentField([=](double t, Vec2 x) { return a + b1 * x.x + b2 * x.y + bt * t; }, domain,
                       SampleLattice::tensor(domain, 2, 2, 2));
}

double ExponentField::operator()(double t, Vec2 x) const {
  SpaceTimePoint z = domain_.clamp({t, x});
  return eval_(z.t, z.x);
}

ExponentField ExponentField::conjugate_field() const {
  Eval base = eval_;
  SpaceTimeBox dom = domain_;
  SampleLattice corners = SampleLattice::tensor(dom, 2, 2, 2);
  return ExponentField([base](double t, Vec2 x) { return conjugate(base(t, x)); }, dom, corners);
}

ExponentField ExponentField::parabolic_star_field() const {
  Eval base = eval_;
  SpaceTimeBox dom = domain_;
  SampleLattice corners = SampleLattice::tensor(dom, 2, 2, 2);
  return ExponentField([base](double t, Vec2 x) { return parabolic_star(base(t, x), 2); }, dom, corners);
}

double conjugate(double p_value) {
  if (!(p_value > 1.0)) throw DegenerateExponent("conjugate requires p > 1");
  return p_value / (p_value - 1.0);
}

double parabolic_star(double p_value, int d) {
  if (d < 2) throw UnsupportedDimension("parabolic interpolation exponent requires d >= 2");
  if (p_value < d) return p_value * (d + 2.0) / d;
  return p_value + 2.0;
}

std::pair<double, double> limit_exponents(const ExponentField& p, const SampleLattice& lattice) {
  if (lattice.empty()) throw DegenerateExponent("limit_exponents: empty lattice");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& z : lattice.points()) {
    double v = p(z);
    if (!std::isfinite(v) || v <= 1.0) throw DegenerateExponent("sampled exponent value <= 1");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

LogHolderReport log_holder_check(const ExponentField& p, const SampleLattice& lattice, double budget_c1) {
  const auto& pts = lattice.points();
  LogHolderReport rep;
  if (pts.size() < 2) return rep;

  std::vector<double> vals(pts.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    vals[i] = p(pts[i]);
    mean += vals[i];
  }
  mean /= static_cast<double>(pts.size());
  rep.p_infinity = mean;

  double local = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double dt = pts[i].t - pts[j].t;
      Vec2 dx = pts[i].x - pts[j].x;
      double dist = std::sqrt(dt * dt + dx.dot(dx));
      if (dist <= 0.0) continue;
      local = std::max(local, std::abs(vals[i] - vals[j]) * std::log(M_E + 1.0 / dist));
    }
  }
  rep.local_constant = local;

  double decay = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double nz = std::sqrt(pts[i].t * pts[i].t + pts[i].x.dot(pts[i].x));
    double modulus = std::log(M_E + (nz > 0.0 ? 1.0 / nz : std::numeric_limits<double>::infinity()));
    if (!std::isfinite(modulus)) continue;  // z = 0 has infinite modulus, vacuous constraint
    decay = std::max(decay, std::abs(vals[i] - mean) * modulus);
  }
  rep.decay_constant = decay;
  rep.max_violation = std::max(0.0, local - budget_c1);
  return rep;
}

}  // namespace parex
