// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#include "parex/field.hpp"

#include <cmath>

#include "parex/errors.hpp"

namespace parex {

DiscreteField::DiscreteField(FieldRank rank, std::vector<SpaceTimePoint> points, std::vector<double> weights,
                             std::vector<double> values)
    : rank_(rank), points_(std::move(points)), weights_(std::move(weights)), values_(std::move(values)) {
  if (weights_.size() != points_.size() || values_.size() != points_.size() * static_cast<std::size_t>(ncomp()))
    throw BadSpec("DiscreteField: inconsistent points/weights/values lengths");
  for (double w : weights_)
    if (!(w > 0.0)) throw BadSpec("DiscreteField: quadrature weights must be positive");
}

double DiscreteField::measure() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

double DiscreteField::abs_at(std::size_t i) const {
  switch (rank_) {
    case FieldRank::scalar: return std::abs(values_[i]);
    case FieldRank::vector: return vector_at(i).norm();
    case FieldRank::sym_tensor: return tensor_at(i).norm();
  }
  return 0.0;
}

double DiscreteField::contract_at(std::size_t i, const DiscreteField& other) const {
  if (other.rank_ != rank_) throw BadSpec("contract_at: mismatched field ranks");
  switch (rank_) {
    case FieldRank::scalar: return values_[i] * other.values_[i];
    case FieldRank::vector: return vector_at(i).dot(other.vector_at(i));
    case FieldRank::sym_tensor: return tensor_at(i).ddot(other.tensor_at(i));
  }
  return 0.0;
}

DiscreteField DiscreteField::scaled(double alpha) const {
  std::vector<double> v = values_;
  for (double& a : v) a *= alpha;
  return DiscreteField(rank_, points_, weights_, std::move(v));
}

DiscreteField DiscreteField::plus(const DiscreteField& other) const {
  if (other.rank_ != rank_ || other.size() != size()) throw BadSpec("plus: fields must share rank and quadrature");
  std::vector<double> v = values_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
  return DiscreteField(rank_, points_, weights_, std::move(v));
}

DiscreteField DiscreteField::sample_scalar(const DiscreteField& skel,
                                           const std::function<double(double, Vec2)>& f) {
  std::vector<double> v(skel.size());
  for (std::size_t i = 0; i < skel.size(); ++i) v[i] = f(skel.points()[i].t, skel.points()[i].x);
  return DiscreteField(FieldRank::scalar, skel.points(), skel.weights(), std::move(v));
}

DiscreteField DiscreteField::sample_vector(const DiscreteField& skel,
                                           const std::function<Vec2(double, Vec2)>& f) {
  std::vector<double> v(2 * skel.size());
  for (std::size_t i = 0; i < skel.size(); ++i) {
    Vec2 val = f(skel.points()[i].t, skel.points()[i].x);
    v[2 * i] = val.x;
    v[2 * i + 1] = val.y;
  }
  return DiscreteField(FieldRank::vector, skel.points(), skel.weights(), std::move(v));
}

DiscreteField DiscreteField::sample_tensor(const DiscreteField& skel,
                                           const std::function<SymTensor2(double, Vec2)>& f) {
  std::vector<double> v(3 * skel.size());
  for (std::size_t i = 0; i < skel.size(); ++i) {
    SymTensor2 val = f(skel.points()[i].t, skel.points()[i].x);
    v[3 * i] = val.xx;
    v[3 * i + 1] = val.yy;
    v[3 * i + 2] = val.xy;
  }
  return DiscreteField(FieldRank::sym_tensor, skel.points(), skel.weights(), std::move(v));
}

DiscreteField gauss_skeleton(const SpaceTimeBox& box, int nt, int nx) {
  auto [xt, wt] = gauss_legendre_01(nt);
  auto [xs, ws] = gauss_legendre_01(nx);
  double Lt = box.t1 - box.t0;
  double L1 = box.x1_max - box.x1_min;
  double L2 = box.x2_max - box.x2_min;
  std::vector<SpaceTimePoint> pts;
  std::vector<double> w;
  pts.reserve(static_cast<std::size_t>(nt) * nx * nx);
  w.reserve(pts.capacity());
  for (int it = 0; it < nt; ++it)
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nx; ++j) {
        pts.push_back({box.t0 + Lt * xt[it], {box.x1_min + L1 * xs[i], box.x2_min + L2 * xs[j]}});
        w.push_back(Lt * wt[it] * L1 * ws[i] * L2 * ws[j]);
      }
  std::vector<double> zeros(pts.size(), 0.0);
  return DiscreteField(FieldRank::scalar, std::move(pts), std::move(w), std::move(zeros));
}

DiscreteField gauss_skeleton_space(const SpaceTimeBox& box, double t, int nx) {
  auto [xs, ws] = gauss_legendre_01(nx);
  double L1 = box.x1_max - box.x1_min;
  double L2 = box.x2_max - box.x2_min;
  std::vector<SpaceTimePoint> pts;
  std::vector<double> w;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nx; ++j) {
      pts.push_back({t, {box.x1_min + L1 * xs[i], box.x2_min + L2 * xs[j]}});
      w.push_back(L1 * ws[i] * L2 * ws[j]);
    }
  std::vector<double> zeros(pts.size(), 0.0);
  return DiscreteField(FieldRank::scalar, std::move(pts), std::move(w), std::move(zeros));
}

}  // namespace parex
