// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#include "parex/mesh_fem.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <map>

#include "parex/errors.hpp"

namespace parex {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

void mark_boundary(MeshLevel& m) {
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : m.triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = t.v[e], b = t.v[(e + 1) % 3];
      edge_count[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  m.boundary.assign(m.vertices.size(), 0);
  for (const auto& [edge, count] : edge_count) {
    if (count == 1) {
      m.boundary[edge.first] = 1;
      m.boundary[edge.second] = 1;
    }
  }
}

void check_orientation(const MeshLevel& m) {
  for (int k = 0; k < m.n_triangles(); ++k)
    if (!(m.area(k) > 0.0)) throw MeshError("triangle with non-positive area");
}

std::unique_ptr<MeshLevel> refine(const MeshLevel& coarse) {
  auto fine = std::make_unique<MeshLevel>();
  fine->vertices = coarse.vertices;
  fine->origin.resize(coarse.vertices.size());
  for (int i = 0; i < coarse.n_vertices(); ++i) fine->origin[static_cast<std::size_t>(i)] = {i, i};

  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    int id = fine->n_vertices();
    fine->vertices.push_back((coarse.vertices[a] + coarse.vertices[b]) * 0.5);
    fine->origin.push_back({key.first, key.second});
    midpoint[key] = id;
    return id;
  };

  for (const auto& t : coarse.triangles) {
    int v0 = t.v[0], v1 = t.v[1], v2 = t.v[2];
    int m01 = mid(v0, v1), m12 = mid(v1, v2), m02 = mid(v0, v2);
    fine->triangles.push_back({{v0, m01, m02}});
    fine->triangles.push_back({{v1, m12, m01}});
    fine->triangles.push_back({{v2, m02, m12}});
    fine->triangles.push_back({{m01, m12, m02}});
  }
  fine->parent = &coarse;
  fine->level_index = coarse.level_index + 1;
  mark_boundary(*fine);
  check_orientation(*fine);
  return fine;
}

}  // namespace

int MeshLevel::n_interior() const {
  int n = 0;
  for (char b : boundary) n += (b == 0);
  return n;
}

double MeshLevel::area(int k) const {
  const auto& t = triangles[k];
  return signed_area(vertices[t.v[0]], vertices[t.v[1]], vertices[t.v[2]]);
}

double MeshLevel::total_area() const {
  double s = 0.0;
  for (int k = 0; k < n_triangles(); ++k) s += area(k);
  return s;
}

std::vector<int> MeshLevel::interior_vertices() const {
  std::vector<int> out;
  for (int i = 0; i < n_vertices(); ++i)
    if (!boundary[i]) out.push_back(i);
  return out;
}

std::vector<std::unique_ptr<MeshLevel>> build_mesh_hierarchy(const Domain& domain, int levels) {
  if (levels < 1 || levels > 8) throw MeshError("build_mesh_hierarchy: levels must be in [1, 8]");
  auto base = std::make_unique<MeshLevel>();
  if (std::holds_alternative<UnitSquare>(domain)) {
    base->vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    base->triangles = {{{0, 1, 2}}, {{0, 2, 3}}};
  } else {
    double R = std::get<Disk>(domain).radius;
    if (!(R > 0.0)) throw MeshError("disk radius must be positive");
    base->vertices.push_back({0, 0});
    const int n = 8;
    for (int i = 0; i < n; ++i) {
      double a = 2.0 * M_PI * i / n;
      base->vertices.push_back({R * std::cos(a), R * std::sin(a)});
    }
    for (int i = 0; i < n; ++i) base->triangles.push_back({{0, 1 + i, 1 + (i + 1) % n}});
  }
  base->origin.resize(base->vertices.size());
  for (int i = 0; i < base->n_vertices(); ++i) base->origin[static_cast<std::size_t>(i)] = {i, i};
  mark_boundary(*base);
  check_orientation(*base);

  std::vector<std::unique_ptr<MeshLevel>> hierarchy;
  hierarchy.push_back(std::move(base));
  for (int l = 1; l < levels; ++l) hierarchy.push_back(refine(*hierarchy.back()));
  return hierarchy;
}

FEFunction::FEFunction(const MeshLevel& mesh) : mesh_(&mesh), values_(mesh.vertices.size()) {}

FEFunction FEFunction::interpolate(const MeshLevel& mesh, const std::function<Vec2(Vec2)>& f) {
  FEFunction u(mesh);
  for (int i = 0; i < mesh.n_vertices(); ++i)
    if (!mesh.boundary[i]) u.values_[i] = f(mesh.vertices[i]);
  return u;
}

FEFunction FEFunction::interpolate_free(const MeshLevel& mesh, const std::function<Vec2(Vec2)>& f) {
  FEFunction u(mesh);
  for (int i = 0; i < mesh.n_vertices(); ++i) u.values_[i] = f(mesh.vertices[i]);
  return u;
}

Vec2 FEFunction::eval(Vec2 x) const {
  const MeshLevel& m = *mesh_;
  for (int k = 0; k < m.n_triangles(); ++k) {
    const auto& t = m.triangles[k];
    const Vec2 &a = m.vertices[t.v[0]], &b = m.vertices[t.v[1]], &c = m.vertices[t.v[2]];
    double A = signed_area(a, b, c);
    double l0 = signed_area(x, b, c) / A;
    double l1 = signed_area(a, x, c) / A;
    double l2 = 1.0 - l0 - l1;
    const double eps = 1e-12;
    if (l0 >= -eps && l1 >= -eps && l2 >= -eps)
      return values_[t.v[0]] * l0 + values_[t.v[1]] * l1 + values_[t.v[2]] * l2;
  }
  throw MeshError("FEFunction::eval: point outside mesh");
}

FEFunction& FEFunction::operator+=(const FEFunction& o) {
  if (o.mesh_ != mesh_) throw LevelMismatch("FEFunction::operator+=: different mesh levels");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

FEFunction FEFunction::scaled(double s) const {
  FEFunction out = *this;
  for (auto& v : out.values_) v = v * s;
  return out;
}

TriGeometry tri_geometry(const MeshLevel& mesh, int k) {
  const auto& t = mesh.triangles[k];
  const Vec2 &a = mesh.vertices[t.v[0]], &b = mesh.vertices[t.v[1]], &c = mesh.vertices[t.v[2]];
  double A = signed_area(a, b, c);
  TriGeometry g;
  g.v = t.v;
  g.area = A;
  // grad lambda_i = rot90(opposite edge) / (2A)
  g.grad[0] = {(b.y - c.y) / (2 * A), (c.x - b.x) / (2 * A)};
  g.grad[1] = {(c.y - a.y) / (2 * A), (a.x - c.x) / (2 * A)};
  g.grad[2] = {(a.y - b.y) / (2 * A), (b.x - a.x) / (2 * A)};
  return g;
}

namespace {

SymTensor2 strain_on_tri(const FEFunction& u, const TriGeometry& g) {
  double d11 = 0.0, d12 = 0.0, d21 = 0.0, d22 = 0.0;  // d_{ij} = du_i/dx_j
  for (int i = 0; i < 3; ++i) {
    Vec2 ui = u.value(g.v[i]);
    d11 += ui.x * g.grad[i].x;
    d12 += ui.x * g.grad[i].y;
    d21 += ui.y * g.grad[i].x;
    d22 += ui.y * g.grad[i].y;
  }
  return {d11, d22, 0.5 * (d12 + d21)};
}

}  // namespace

DiscreteField symmetric_gradient(const FEFunction& u, double t) {
  const MeshLevel& m = u.mesh();
  std::vector<SpaceTimePoint> pts(m.n_triangles());
  std::vector<double> w(m.n_triangles());
  std::vector<double> vals(3 * m.n_triangles());
  for (int k = 0; k < m.n_triangles(); ++k) {
    TriGeometry g = tri_geometry(m, k);
    Vec2 centroid = (m.vertices[g.v[0]] + m.vertices[g.v[1]] + m.vertices[g.v[2]]) * (1.0 / 3.0);
    pts[k] = {t, centroid};
    w[k] = g.area;
    SymTensor2 e = strain_on_tri(u, g);
    vals[3 * k] = e.xx;
    vals[3 * k + 1] = e.yy;
    vals[3 * k + 2] = e.xy;
  }
  return DiscreteField(FieldRank::sym_tensor, std::move(pts), std::move(w), std::move(vals));
}

DiscreteField gradient_magnitude(const FEFunction& u, double t) {
  const MeshLevel& m = u.mesh();
  std::vector<SpaceTimePoint> pts(m.n_triangles());
  std::vector<double> w(m.n_triangles());
  std::vector<double> vals(m.n_triangles());
  for (int k = 0; k < m.n_triangles(); ++k) {
    TriGeometry g = tri_geometry(m, k);
    Vec2 centroid = (m.vertices[g.v[0]] + m.vertices[g.v[1]] + m.vertices[g.v[2]]) * (1.0 / 3.0);
    double d11 = 0, d12 = 0, d21 = 0, d22 = 0;
    for (int i = 0; i < 3; ++i) {
      Vec2 ui = u.value(g.v[i]);
      d11 += ui.x * g.grad[i].x;
      d12 += ui.x * g.grad[i].y;
      d21 += ui.y * g.grad[i].x;
      d22 += ui.y * g.grad[i].y;
    }
    pts[k] = {t, centroid};
    w[k] = g.area;
    vals[k] = std::sqrt(d11 * d11 + d12 * d12 + d21 * d21 + d22 * d22);
  }
  return DiscreteField(FieldRank::scalar, std::move(pts), std::move(w), std::move(vals));
}

double l2_inner(const FEFunction& u, const FEFunction& v) {
  if (&u.mesh() != &v.mesh()) throw LevelMismatch("l2_inner: functions on different levels");
  const MeshLevel& m = u.mesh();
  double s = 0.0;
  // local P1 mass matrix |K|/12 [2 1 1; 1 2 1; 1 1 2] per component:
  // u^T M v = |K|/12 (sum_i u_i.v_i + (sum_i u_i).(sum_j v_j))
  for (int k = 0; k < m.n_triangles(); ++k) {
    const auto& t = m.triangles[k];
    double A = m.area(k);
    Vec2 su{}, sv{};
    double diag = 0.0;
    for (int i = 0; i < 3; ++i) {
      Vec2 ui = u.value(t.v[i]), vi = v.value(t.v[i]);
      su += ui;
      sv += vi;
      diag += ui.dot(vi);
    }
    s += A / 12.0 * (diag + su.dot(sv));
  }
  return s;
}

FEFunction prolong(const FEFunction& u, const MeshLevel& fine) {
  // walk up from fine to u's level, collecting the chain
  std::vector<const MeshLevel*> chain;
  const MeshLevel* cur = &fine;
  while (cur != nullptr && cur != &u.mesh()) {
    chain.push_back(cur);
    cur = cur->parent;
  }
  if (cur != &u.mesh()) throw LevelMismatch("prolong: target is not a descendant of the source level");

  FEFunction result = u;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const MeshLevel& lvl = **it;
    FEFunction next(lvl);
    for (int i = 0; i < lvl.n_vertices(); ++i) {
      auto [a, b] = lvl.origin[static_cast<std::size_t>(i)];
      Vec2 val = (result.value(a) + result.value(b)) * 0.5;
      next.set_value(i, val);
      // boundary vertices stay zero through set_value; inherited interior
      // values are exact, midpoints are P1-exact averages
    }
    result = next;
  }
  return result;
}

const TriQuadRule& tri_rule(int degree) {
  static const TriQuadRule r1{{{1.0 / 3, 1.0 / 3, 1.0 / 3}}, {1.0}};
  static const TriQuadRule r2{{{2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}},
                              {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  static const TriQuadRule r5 = [] {
    TriQuadRule r;
    const double a1 = (6.0 + std::sqrt(15.0)) / 21.0, a2 = (6.0 - std::sqrt(15.0)) / 21.0;
    const double w1 = (155.0 + std::sqrt(15.0)) / 1200.0, w2 = (155.0 - std::sqrt(15.0)) / 1200.0;
    r.bary = {{1.0 / 3, 1.0 / 3, 1.0 / 3},
              {a1, a1, 1 - 2 * a1}, {a1, 1 - 2 * a1, a1}, {1 - 2 * a1, a1, a1},
              {a2, a2, 1 - 2 * a2}, {a2, 1 - 2 * a2, a2}, {1 - 2 * a2, a2, a2}};
    r.weights = {9.0 / 40.0, w1, w1, w1, w2, w2, w2};
    return r;
  }();
  if (degree <= 1) return r1;
  if (degree <= 2) return r2;
  return r5;
}

DiscreteField fe_vector_field(const FEFunction& u, int quad_degree, double t) {
  const MeshLevel& m = u.mesh();
  const TriQuadRule& rule = tri_rule(quad_degree);
  std::size_t n = static_cast<std::size_t>(m.n_triangles()) * rule.bary.size();
  std::vector<SpaceTimePoint> pts;
  std::vector<double> w;
  std::vector<double> vals;
  pts.reserve(n);
  w.reserve(n);
  vals.reserve(2 * n);
  for (int k = 0; k < m.n_triangles(); ++k) {
    const auto& tri = m.triangles[k];
    double A = m.area(k);
    for (std::size_t q = 0; q < rule.bary.size(); ++q) {
      const auto& l = rule.bary[q];
      Vec2 x = m.vertices[tri.v[0]] * l[0] + m.vertices[tri.v[1]] * l[1] + m.vertices[tri.v[2]] * l[2];
      Vec2 val = u.value(tri.v[0]) * l[0] + u.value(tri.v[1]) * l[1] + u.value(tri.v[2]) * l[2];
      pts.push_back({t, x});
      w.push_back(A * rule.weights[q]);
      vals.push_back(val.x);
      vals.push_back(val.y);
    }
  }
  return DiscreteField(FieldRank::vector, std::move(pts), std::move(w), std::move(vals));
}

bool korn_rigidity_holds(const MeshLevel& mesh) {
  auto interior = mesh.interior_vertices();
  if (interior.empty()) return true;  // only the zero field, vacuously rigid
  std::vector<int> dof(mesh.n_vertices(), -1);
  for (std::size_t i = 0; i < interior.size(); ++i) dof[interior[i]] = static_cast<int>(i);
  int n = static_cast<int>(interior.size()) * 2;

  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    TriGeometry g = tri_geometry(mesh, k);
    // strain of basis function (i, comp): comp=0 -> (gx, 0, gy/2), comp=1 -> (0, gy, gx/2)
    std::array<SymTensor2, 6> E;
    for (int i = 0; i < 3; ++i) {
      E[2 * i] = {g.grad[i].x, 0.0, 0.5 * g.grad[i].y};
      E[2 * i + 1] = {0.0, g.grad[i].y, 0.5 * g.grad[i].x};
    }
    for (int i = 0; i < 3; ++i) {
      if (dof[g.v[i]] < 0) continue;
      for (int j = 0; j < 3; ++j) {
        if (dof[g.v[j]] < 0) continue;
        for (int ci = 0; ci < 2; ++ci)
          for (int cj = 0; cj < 2; ++cj)
            trip.emplace_back(2 * dof[g.v[i]] + ci, 2 * dof[g.v[j]] + cj,
                              g.area * E[2 * i + ci].ddot(E[2 * j + cj]));
      }
    }
  }
  Eigen::SparseMatrix<double> K(n, n);
  K.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
  if (ldlt.info() != Eigen::Success) return false;
  double dmin = ldlt.vectorD().minCoeff();
  return dmin > 1e-14;
}

std::vector<double> lumped_vertex_areas(const MeshLevel& mesh) {
  std::vector<double> a(mesh.vertices.size(), 0.0);
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    double A = mesh.area(k);
    for (int i = 0; i < 3; ++i) a[mesh.triangles[k].v[i]] += A / 3.0;
  }
  return a;
}

}  // namespace parex
