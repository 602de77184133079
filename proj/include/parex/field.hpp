// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "parex/core.hpp"

namespace parex {

enum class FieldRank { scalar, vector, sym_tensor };

inline int components(FieldRank r) {
  switch (r) {
    case FieldRank::scalar: return 1;
    case FieldRank::vector: return 2;
    case FieldRank::sym_tensor: return 3;
  }
  return 1;
}

// Quadrature-sampled field on a space-time node set: values, nodes and
// positive weights whose sum is the space-time measure. Symmetric tensors are
// stored as (xx, yy, xy), so A = A^T holds structurally.
class DiscreteField {
 public:
  DiscreteField(FieldRank rank, std::vector<SpaceTimePoint> points, std::vector<double> weights,
                std::vector<double> values);

  static DiscreteField scalar(std::vector<SpaceTimePoint> pts, std::vector<double> w, std::vector<double> v) {
    return DiscreteField(FieldRank::scalar, std::move(pts), std::move(w), std::move(v));
  }

  FieldRank rank() const { return rank_; }
  int ncomp() const { return components(rank_); }
  std::size_t size() const { return points_.size(); }
  const std::vector<SpaceTimePoint>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& values() const { return values_; }

  double measure() const;  // sum of weights = |Q|

  double scalar_at(std::size_t i) const { return values_[i]; }
  Vec2 vector_at(std::size_t i) const { return {values_[2 * i], values_[2 * i + 1]}; }
  SymTensor2 tensor_at(std::size_t i) const {
    return {values_[3 * i], values_[3 * i + 1], values_[3 * i + 2]};
  }

  // Euclidean / Frobenius magnitude of the node value.
  double abs_at(std::size_t i) const;

  // Pointwise contraction with a same-rank field sharing this quadrature
  // (scalar product, dot product, or Frobenius double contraction).
  double contract_at(std::size_t i, const DiscreteField& other) const;

  DiscreteField scaled(double alpha) const;
  DiscreteField plus(const DiscreteField& other) const;  // same rank and quadrature

  // Samplers over an existing quadrature skeleton (points/weights reused).
  static DiscreteField sample_scalar(const DiscreteField& skeleton,
                                     const std::function<double(double, Vec2)>& f);
  static DiscreteField sample_vector(const DiscreteField& skeleton,
                                     const std::function<Vec2(double, Vec2)>& f);
  static DiscreteField sample_tensor(const DiscreteField& skeleton,
                                     const std::function<SymTensor2(double, Vec2)>& f);

 private:
  FieldRank rank_;
  std::vector<SpaceTimePoint> points_;
  std::vector<double> weights_;
  std::vector<double> values_;
};

// Tensor-product Gauss quadrature skeleton (zero values, scalar rank) on a
// space-time box: nt Gauss points in time times nx*nx in space.
DiscreteField gauss_skeleton(const SpaceTimeBox& box, int nt, int nx);

// Space-only skeleton at a fixed time slice (weight = area element).
DiscreteField gauss_skeleton_space(const SpaceTimeBox& box, double t, int nx);

}  // namespace parex
