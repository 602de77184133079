// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "parex/core.hpp"
#include "parex/field.hpp"

namespace parex {

struct UnitSquare {};
struct Disk {
  double radius{1.0};
};
using Domain = std::variant<UnitSquare, Disk>;

// One level of the nested hierarchy. Refinement is uniform red-refinement, so
// coarse P1 functions are exactly representable on every finer level.
class MeshLevel {
 public:
  struct Tri {
    std::array<int, 3> v;
  };

  std::vector<Vec2> vertices;
  std::vector<Tri> triangles;
  std::vector<char> boundary;               // per-vertex Dirichlet mask
  const MeshLevel* parent = nullptr;        // coarser level, null on level 0
  int level_index = 0;
  // Per-vertex provenance w.r.t. the parent: {a,a} inherited vertex a,
  // {a,b} midpoint of coarse edge (a,b). Level 0 stores {i,i}.
  std::vector<std::array<int, 2>> origin;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int n_interior() const;
  double area(int k) const;
  double total_area() const;
  std::vector<int> interior_vertices() const;
};

// Hierarchy of `levels` meshes, level 0 coarse. Shared boundary polygon across
// levels (the disk keeps its level-0 polygonal boundary).
std::vector<std::unique_ptr<MeshLevel>> build_mesh_hierarchy(const Domain& domain, int levels);

// Vector-valued P1 function with zero Dirichlet trace; boundary vertices carry
// an implicit (enforced) zero.
class FEFunction {
 public:
  FEFunction() = default;
  explicit FEFunction(const MeshLevel& mesh);
  // Nodal interpolation with the Dirichlet mask applied (boundary forced 0).
  static FEFunction interpolate(const MeshLevel& mesh, const std::function<Vec2(Vec2)>& f);
  // Unconstrained nodal interpolation; used to probe strain identities
  // (rigid modes and the like) that need boundary values.
  static FEFunction interpolate_free(const MeshLevel& mesh, const std::function<Vec2(Vec2)>& f);

  const MeshLevel& mesh() const { return *mesh_; }
  bool has_mesh() const { return mesh_ != nullptr; }

  Vec2 value(int vertex) const { return values_[vertex]; }
  void set_value(int vertex, Vec2 v) { values_[vertex] = v; }
  const std::vector<Vec2>& values() const { return values_; }

  Vec2 eval(Vec2 x) const;            // point evaluation (triangle scan)
  FEFunction& operator+=(const FEFunction& o);
  FEFunction scaled(double s) const;

 private:
  const MeshLevel* mesh_ = nullptr;
  std::vector<Vec2> values_;
};

struct TriGeometry {
  std::array<int, 3> v;
  double area;
  std::array<Vec2, 3> grad;  // P1 basis gradients
};
TriGeometry tri_geometry(const MeshLevel& mesh, int k);

// Symmetric part of the gradient, constant per triangle (exact for P1);
// returned as a sym_tensor field with centroid nodes and area weights, at time
// slice t.
DiscreteField symmetric_gradient(const FEFunction& u, double t = 0.0);

// Per-triangle constant full gradient magnitude |grad u|, same layout.
DiscreteField gradient_magnitude(const FEFunction& u, double t = 0.0);

// Exact P1 mass-matrix inner product (both functions on the same level).
double l2_inner(const FEFunction& u, const FEFunction& v);

// Exact transport of a coarse function to a descendant level.
FEFunction prolong(const FEFunction& u, const MeshLevel& fine);

// Barycentric quadrature rule on the reference triangle; weights sum to 1.
struct TriQuadRule {
  std::vector<std::array<double, 3>> bary;
  std::vector<double> weights;
};
const TriQuadRule& tri_rule(int degree);  // degree in {1, 2, 5}

// Space quadrature of an FE function: nodes, area weights, interpolated values
// at time slice t.
DiscreteField fe_vector_field(const FEFunction& u, int quad_degree, double t = 0.0);

// Discrete Korn rigidity: the symmetric-gradient Gram matrix restricted to the
// interior degrees of freedom is positive definite (no nonzero zero-strain
// field with zero trace).
bool korn_rigidity_holds(const MeshLevel& mesh);

// Row sums of the P1 mass matrix (lumped vertex areas).
std::vector<double> lumped_vertex_areas(const MeshLevel& mesh);

}  // namespace parex
