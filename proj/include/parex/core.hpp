// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace parex {

struct Vec2 {
  double x{0.0};
  double y{0.0};

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::sqrt(x * x + y * y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Symmetric 2x2 tensor stored as (xx, yy, xy); symmetry holds by construction.
struct SymTensor2 {
  double xx{0.0};
  double yy{0.0};
  double xy{0.0};

  SymTensor2() = default;
  SymTensor2(double xx_, double yy_, double xy_) : xx(xx_), yy(yy_), xy(xy_) {}

  SymTensor2 operator+(const SymTensor2& o) const { return {xx + o.xx, yy + o.yy, xy + o.xy}; }
  SymTensor2 operator-(const SymTensor2& o) const { return {xx - o.xx, yy - o.yy, xy - o.xy}; }
  SymTensor2 operator*(double s) const { return {xx * s, yy * s, xy * s}; }
  SymTensor2& operator+=(const SymTensor2& o) {
    xx += o.xx;
    yy += o.yy;
    xy += o.xy;
    return *this;
  }

  // Frobenius inner product; the off-diagonal entry appears twice in the matrix.
  double ddot(const SymTensor2& o) const { return xx * o.xx + yy * o.yy + 2.0 * xy * o.xy; }
  double norm() const { return std::sqrt(ddot(*this)); }

  Vec2 apply(const Vec2& v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
};

inline SymTensor2 operator*(double s, const SymTensor2& a) { return a * s; }

struct SpaceTimePoint {
  double t{0.0};
  Vec2 x{};
};

struct SpaceTimeBox {
  double t0{0.0}, t1{1.0};
  double x1_min{0.0}, x1_max{1.0};
  double x2_min{0.0}, x2_max{1.0};

  static SpaceTimeBox unit_cylinder(double T = 1.0) { return {0.0, T, 0.0, 1.0, 0.0, 1.0}; }
  static SpaceTimeBox ball_cylinder(double radius, double T = 1.0) {
    return {0.0, T, -radius, radius, -radius, radius};
  }

  SpaceTimePoint clamp(SpaceTimePoint z) const {
    auto clip = [](double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); };
    z.t = clip(z.t, t0, t1);
    z.x.x = clip(z.x.x, x1_min, x1_max);
    z.x.y = clip(z.x.y, x2_min, x2_max);
    return z;
  }
};

// Gauss-Legendre nodes/weights on [0,1], by Newton iteration on P_n.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_01(int n);

}  // namespace parex
