// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "parex/core.hpp"

namespace parex {

// Sample points used to approximate essential inf/sup and to probe the
// log-Hoelder modulus. The true essential bounds of a non-smooth exponent are
// not certifiable from finitely many samples; everything downstream works with
// lattice extrema.
class SampleLattice {
 public:
  SampleLattice() = default;
  explicit SampleLattice(std::vector<SpaceTimePoint> points) : points_(std::move(points)) {}

  // Tensor grid including the box endpoints.
  static SampleLattice tensor(const SpaceTimeBox& box, int nt, int nx1, int nx2);
  // Tensor grid of cell midpoints (never touches the closed boundary).
  static SampleLattice tensor_interior(const SpaceTimeBox& box, int nt, int nx1, int nx2);

  const std::vector<SpaceTimePoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

 private:
  std::vector<SpaceTimePoint> points_;
};

// Variable exponent p(t,x) on a closed space-time box. Carries cached lattice
// extrema; evaluation outside the box clamps to the nearest box point.
class ExponentField {
 public:
  using Eval = std::function<double(double t, Vec2 x)>;

  // Constant 2 on the unit cylinder; placeholder for aggregate members.
  ExponentField();
  // Construction scans the given lattice and fails hard on p <= 1, NaN or inf.
  ExponentField(Eval eval, SpaceTimeBox domain, const SampleLattice& lattice);
  // Default lattice: 64x64x64 tensor grid with endpoints.
  ExponentField(Eval eval, SpaceTimeBox domain);

  static ExponentField constant(double value, SpaceTimeBox domain);
  // a + b1*x1 + b2*x2 + bt*t
  static ExponentField affine(double a, double b1, double b2, double bt, SpaceTimeBox domain);

  double operator()(double t, Vec2 x) const;
  double operator()(const SpaceTimePoint& z) const { return (*this)(z.t, z.x); }

  double p_minus() const { return p_minus_; }
  double p_plus() const { return p_plus_; }
  const SpaceTimeBox& domain() const { return domain_; }

  // Pointwise conjugate exponent field p/(p-1).
  ExponentField conjugate_field() const;
  // Pointwise variable parabolic interpolation exponent, d = 2.
  ExponentField parabolic_star_field() const;

 private:
  Eval eval_;
  SpaceTimeBox domain_;
  double p_minus_{0.0};
  double p_plus_{0.0};
};

// p/(p-1); throws DegenerateExponent for p <= 1.
double conjugate(double p_value);

// p*(d+2)/d for p < d, p+2 for p >= d; throws UnsupportedDimension for d < 2.
double parabolic_star(double p_value, int d);

// Lattice extrema of the exponent; throws DegenerateExponent when a sampled
// value is <= 1.
std::pair<double, double> limit_exponents(const ExponentField& p, const SampleLattice& lattice);

struct LogHolderReport {
  double local_constant{0.0};   // max over sampled pairs of |p(z)-p(w)| * log(e + 1/|z-w|)
  double decay_constant{0.0};   // max of |p(z)-p_infinity| * log(e + 1/|z|)
  double p_infinity{0.0};
  double max_violation{0.0};    // max(0, local_constant - budget)
};

LogHolderReport log_holder_check(const ExponentField& p, const SampleLattice& lattice, double budget_c1);

}  // namespace parex
