// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#include "parex/spaces.hpp"

#include <algorithm>
#include <cmath>

#include "parex/errors.hpp"

namespace parex {

namespace {

// |a|^p via exp(p log a); a = 0 handled separately, a beyond 1e300 rejected
// upstream by the norm bracketing.
inline double pow_abs(double a, double p) {
  if (a == 0.0) return 0.0;
  return std::exp(p * std::log(a));
}

}  // namespace

ModularValue modular(const DiscreteField& f, const ExponentField& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double a = f.abs_at(i);
    s += f.weights()[i] * pow_abs(a, p(f.points()[i]));
  }
  return {s, &p};
}

double luxemburg_norm(const DiscreteField& f, const ExponentField& p, double tol) {
  if (!(tol > 0.0)) throw BadSpec("luxemburg_norm: tol must be positive");
  double max_abs = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) max_abs = std::max(max_abs, f.abs_at(i));
  if (max_abs == 0.0) return 0.0;
  if (!(max_abs < 1e300)) throw RootFindFailure("luxemburg_norm: field magnitude overflows");

  auto rho = [&](double lambda) { return modular(f.scaled(1.0 / lambda), p).value; };

  // standard modular-norm bounds: the norm lies between rho^{1/p^+} and
  // rho^{1/p^-} (order depending on which side of 1 rho falls)
  double rho_f = rho(1.0);
  double lo, hi;
  if (std::isfinite(rho_f) && rho_f > 0.0) {
    double a = std::pow(rho_f, 1.0 / p.p_plus());
    double b = std::pow(rho_f, 1.0 / p.p_minus());
    lo = std::min(a, b);
    hi = std::max(a, b);
  } else {
    // overflowing modular: |f/lambda| <= 1 makes rho <= |Q|, shrink from there
    double measure = f.measure();
    hi = max_abs * std::pow(std::max(1.0, measure), 1.0 / p.p_minus());
    lo = hi;
  }
  int guard = 0;
  while (rho(hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 200) throw RootFindFailure("luxemburg_norm: upper bracket expansion failed");
  }
  guard = 0;
  while (rho(lo) <= 1.0) {
    lo *= 0.5;
    if (++guard > 2000 || lo < 1e-300)
      throw RootFindFailure("luxemburg_norm: lower bracket expansion failed");
  }

  // Bisection: keep rho(hi) <= 1 < rho(lo). 200-iteration cap.
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (rho(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= tol * hi) {
      double at_hi = rho(hi);
      if (at_hi >= 1.0 - tol) break;  // unit-modular property achieved
    }
  }
  if (rho(hi) < 1.0 - tol) throw RootFindFailure("luxemburg_norm: bisection did not reach the unit modular");
  return hi;
}

HolderCheck holder_check(const DiscreteField& g, const DiscreteField& f, const ExponentField& p) {
  if (g.size() != f.size()) throw BadSpec("holder_check: fields must share quadrature");
  double lhs = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) lhs += f.weights()[i] * std::abs(g.contract_at(i, f));
  ExponentField pc = p.conjugate_field();
  double rhs = 2.0 * luxemburg_norm(g, pc) * luxemburg_norm(f, p);
  return {lhs, rhs, rhs - lhs};
}

double embedding_check(const DiscreteField& f, const ExponentField& q, const ExponentField& p) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (q(f.points()[i]) > p(f.points()[i]) + 1e-14)
      throw ExponentOrderViolation("embedding_check: q > p at a quadrature node");
  }
  double measure = f.measure();
  return 2.0 * (1.0 + measure) * luxemburg_norm(f, p) - luxemburg_norm(f, q);
}

}  // namespace parex
