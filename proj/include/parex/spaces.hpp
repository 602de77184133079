// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "parex/exponent.hpp"
#include "parex/field.hpp"

namespace parex {

struct ModularValue {
  double value{0.0};
  const ExponentField* exponent{nullptr};
};

// rho_p(f) = sum_i w_i |f_i|^{p(t_i, x_i)}; the quadrature realization of the
// modular. Reduction order is the node order (deterministic).
ModularValue modular(const DiscreteField& f, const ExponentField& p);

// Luxemburg norm inf{lambda > 0 : rho(f/lambda) <= 1} by bracketing and
// bisection on the strictly decreasing map lambda -> rho(f/lambda).
// On return, rho(f/norm) lies in [1-tol, 1] for nonzero f.
double luxemburg_norm(const DiscreteField& f, const ExponentField& p, double tol = 1e-12);

struct HolderCheck {
  double lhs{0.0};   // ||g.f||_{L^1}
  double rhs{0.0};   // 2 ||g||_{p'} ||f||_{p}
  double slack{0.0}; // rhs - lhs
};

HolderCheck holder_check(const DiscreteField& g, const DiscreteField& f, const ExponentField& p);

// slack = 2(1+|G|) ||f||_p - ||f||_q for q <= p pointwise on the nodes.
double embedding_check(const DiscreteField& f, const ExponentField& q, const ExponentField& p);

}  // namespace parex
