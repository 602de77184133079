// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "parex/errors.hpp"
#include "parex/inequalities.hpp"
#include "parex/solver.hpp"
#include "parex/spaces.hpp"

using namespace parex;

namespace {

SpaceTimeBox unit_box(double T = 1.0) { return SpaceTimeBox::unit_cylinder(T); }

ProblemSpec linear_spec(double T = 1.0) {
  ExponentField two = ExponentField::constant(2.0, unit_box(T));
  ExponentField r = ExponentField::constant(3.8, unit_box(T));
  ProblemSpec spec;
  spec.flux = prototype_flux(two, 0.0);
  spec.lower = default_lower_order(r, 0.0, LowerOrderMode::zero);
  spec.T_final = T;
  spec.q = two;
  spec.p = two;
  spec.quad_degree = 2;
  return spec;
}

Vec2 manufactured_exact(double t, Vec2 x) {
  double w = std::exp(-t) * std::sin(M_PI * x.x) * std::sin(M_PI * x.y);
  return {w, w};
}

Vec2 manufactured_source(double t, Vec2 x) {
  double w = std::sin(M_PI * x.x) * std::sin(M_PI * x.y);
  double cc = std::cos(M_PI * x.x) * std::cos(M_PI * x.y);
  double v = std::exp(-t) * (-w + 1.5 * M_PI * M_PI * w - 0.5 * M_PI * M_PI * cc);
  return {v, v};
}

FEFunction random_field(const MeshLevel& mesh, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  FEFunction u(mesh);
  for (int i = 0; i < mesh.n_vertices(); ++i)
    if (!mesh.boundary[i]) u.set_value(i, {dist(rng), dist(rng)});
  return u;
}

}  // namespace

TEST_CASE("initial projection") {
  auto h = build_mesh_hierarchy(UnitSquare{}, 5);

  SUBCASE("zero projects to zero") {
    FEFunction p0 = project_initial([](Vec2) { return Vec2{0, 0}; }, *h[3]);
    for (const auto& v : p0.values()) CHECK(v.norm() == 0.0);
  }
  SUBCASE("projection is idempotent on FE functions") {
    const MeshLevel& m = *h[2];
    FEFunction u = random_field(m, 17);
    FEFunction pu = project_initial([&u](Vec2 x) { return u.eval(x); }, m);
    for (int i = 0; i < m.n_vertices(); ++i) CHECK((pu.value(i) - u.value(i)).norm() <= 1e-12);
  }
  SUBCASE("sine norm grows toward the analytic 1/2 under refinement") {
    // ||u0||_Y = 1/2 for u0 = (sin pi x1 sin pi x2, 0)
    auto u0 = [](Vec2 x) { return Vec2{std::sin(M_PI * x.x) * std::sin(M_PI * x.y), 0.0}; };
    double prev = 0.0;
    for (int lvl : {2, 3, 4}) {
      FEFunction p = project_initial(u0, *h[lvl]);
      double nrm = std::sqrt(l2_inner(p, p));
      CHECK(nrm > prev);
      CHECK(nrm <= 0.5 + 1e-10);  // projection never exceeds the norm
      prev = nrm;
    }
    CHECK(prev == doctest::Approx(0.5).epsilon(1e-3));
  }
}

TEST_CASE("residual assembly") {
  auto h = build_mesh_hierarchy(UnitSquare{}, 4);
  const MeshLevel& m = *h.back();
  ProblemSpec spec = linear_spec();

  SUBCASE("all-zero data gives zero residual") {
    FEFunction z(m);
    auto R = assemble_residual(z, z, 0.1, spec, 0.1);
    for (double r : R) CHECK(r == 0.0);
  }
  SUBCASE("stationary part matches the finite difference of the energy") {
    // p == 2, b == 0: residual minus time term is the gradient of
    // J(u) = 1/2 int |eps u|^2
    FEFunction u = random_field(m, 5);
    auto R = assemble_residual(u, u, 1.0, spec, 0.5);  // prev = u kills the time term

    ExponentField two = spec.p;
    auto J = [&](const FEFunction& w) { return 0.5 * strain_modular(w, two, 0.5); };
    double hstep = 1e-6;
    std::size_t dof = 0;
    for (int i = 0; i < m.n_vertices(); ++i) {
      if (m.boundary[i]) continue;
      for (int c = 0; c < 2; ++c) {
        FEFunction up = u, um = u;
        Vec2 vi = u.value(i);
        up.set_value(i, c == 0 ? Vec2{vi.x + hstep, vi.y} : Vec2{vi.x, vi.y + hstep});
        um.set_value(i, c == 0 ? Vec2{vi.x - hstep, vi.y} : Vec2{vi.x, vi.y - hstep});
        double fd = (J(up) - J(um)) / (2.0 * hstep);
        CHECK(R[dof] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        ++dof;
      }
    }
  }
  SUBCASE("manufactured stationary state has vanishing residual under refinement") {
    // F = eps(u_exact), f = u_exact makes u_exact the stationary point of
    // M u + <S eps u, .> - <f, .> - <F, .> with p == 2, S = identity
    auto u_exact = [](Vec2 x) {
      return Vec2{std::sin(M_PI * x.x) * std::sin(M_PI * x.y), x.x * (1 - x.x) * x.y * (1 - x.y)};
    };
    double prev_norm = 1e300;
    for (int lvl : {1, 2, 3}) {
      const MeshLevel& mesh = *h[lvl];
      ProblemSpec s = linear_spec();
      s.f_source = [&](double, Vec2 x) { return u_exact(x); };
      s.F_source = [&](double, Vec2 x) {
        double c1 = M_PI * std::cos(M_PI * x.x) * std::sin(M_PI * x.y);
        double c2 = M_PI * std::sin(M_PI * x.x) * std::cos(M_PI * x.y);
        double v1x = (1 - 2 * x.x) * x.y * (1 - x.y);
        double v1y = x.x * (1 - x.x) * (1 - 2 * x.y);
        return SymTensor2{c1, v1y, 0.5 * (c2 + v1x)};
      };
      FEFunction uh = FEFunction::interpolate(mesh, u_exact);
      // dt -> infinity turns the step into the stationary problem
      auto R = assemble_residual(uh, uh, 1e12, s, 0.0);
      double nrm = 0.0;
      for (double r : R) nrm = std::max(nrm, std::abs(r));
      CHECK(nrm < prev_norm);
      prev_norm = nrm;
    }
    CHECK(prev_norm <= 2e-2);
  }
}

TEST_CASE("newton solve") {
  auto h = build_mesh_hierarchy(UnitSquare{}, 4);

  SUBCASE("linear problem converges in one iteration") {
    const MeshLevel& m = *h[2];
    ProblemSpec spec = linear_spec();
    spec.lower = default_lower_order(spec.lower.r, 1.0, LowerOrderMode::linear_damping);
    spec.f_source = [](double, Vec2 x) { return Vec2{x.x, -x.y}; };
    FEFunction prev = random_field(m, 23);
    int iters = 0;
    FEFunction u = newton_step_solve(prev, 0.05, spec, 0.05, {30, 1e-10, 1.0}, &iters);
    CHECK(iters == 1);
    auto R = assemble_residual(u, prev, 0.05, spec, 0.05);
    double nrm = 0.0;
    for (double r : R) nrm += r * r;
    CHECK(std::sqrt(nrm) <= 1e-9);
  }
  SUBCASE("matches an independently assembled dense linear system") {
    // p == 2, b(a) = a: one implicit Euler step solves
    // (M/dt + K + M_b) u = M prev / dt + rhs
    const MeshLevel& m = *h[1];  // 9 vertices, 1 interior
    ProblemSpec spec = linear_spec();
    spec.lower = default_lower_order(spec.lower.r, 1.0, LowerOrderMode::linear_damping);
    spec.f_source = [](double, Vec2) { return Vec2{1.0, 2.0}; };
    FEFunction prev = random_field(m, 31);
    double dt = 0.1;
    FEFunction u = newton_step_solve(prev, dt, spec, dt, {30, 1e-12, 1.0});

    auto interior = m.interior_vertices();
    int n = static_cast<int>(interior.size()) * 2;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    std::vector<int> dof(m.n_vertices(), -1);
    for (std::size_t i = 0; i < interior.size(); ++i) dof[interior[i]] = static_cast<int>(i);
    const TriQuadRule& rule = tri_rule(2);
    for (int k = 0; k < m.n_triangles(); ++k) {
      TriGeometry g = tri_geometry(m, k);
      std::array<SymTensor2, 6> E;
      for (int i = 0; i < 3; ++i) {
        E[2 * i] = {g.grad[i].x, 0, 0.5 * g.grad[i].y};
        E[2 * i + 1] = {0, g.grad[i].y, 0.5 * g.grad[i].x};
      }
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double mass = g.area / 12.0 * (i == j ? 2 : 1);
          for (int ci = 0; ci < 2; ++ci) {
            if (dof[g.v[i]] < 0) continue;
            int row = 2 * dof[g.v[i]] + ci;
            // mass terms: time + damping b(a) = a
            if (dof[g.v[j]] >= 0) {
              A(row, 2 * dof[g.v[j]] + ci) += mass / dt + mass;
              for (int cj = 0; cj < 2; ++cj)
                A(row, 2 * dof[g.v[j]] + cj) += g.area * E[2 * i + ci].ddot(E[2 * j + cj]);
            }
            Vec2 pj = prev.value(g.v[j]);
            rhs[row] += (ci == 0 ? pj.x : pj.y) * mass / dt;
          }
        }
      for (std::size_t q = 0; q < rule.bary.size(); ++q) {
        for (int i = 0; i < 3; ++i) {
          if (dof[g.v[i]] < 0) continue;
          double w = g.area * rule.weights[q] * rule.bary[q][i];
          rhs[2 * dof[g.v[i]]] += w * 1.0;
          rhs[2 * dof[g.v[i]] + 1] += w * 2.0;
        }
      }
    }
    Eigen::VectorXd sol = A.fullPivLu().solve(rhs);
    for (std::size_t i = 0; i < interior.size(); ++i) {
      CHECK(u.value(interior[i]).x == doctest::Approx(sol[2 * i]).epsilon(1e-9));
      CHECK(u.value(interior[i]).y == doctest::Approx(sol[2 * i + 1]).epsilon(1e-9));
    }
  }
  SUBCASE("plugged model without an analytic Jacobian uses finite differences") {
    const MeshLevel& m = *h[2];
    SpaceTimeBox box = unit_box();
    ExponentField p = ExponentField::affine(1.6, 0.3, 0.0, 0.0, box);
    ProblemSpec spec = linear_spec();
    spec.flux = prototype_flux(p, 0.1);
    spec.p = p;
    spec.f_source = [](double, Vec2 x) { return Vec2{x.y, -x.x}; };
    FEFunction prev = random_field(m, 77);

    FEFunction with_analytic = newton_step_solve(prev, 0.05, spec, 0.05, {30, 1e-11, 1.0});
    ProblemSpec plugged = spec;
    plugged.flux.jacobian = nullptr;  // force the finite-difference route
    plugged.lower.jacobian = nullptr;
    FEFunction with_fd = newton_step_solve(prev, 0.05, plugged, 0.05, {30, 1e-11, 1.0});
    for (int i = 0; i < m.n_vertices(); ++i)
      CHECK((with_analytic.value(i) - with_fd.value(i)).norm() <= 1e-9);
  }
  SUBCASE("nonlinear prototype with small exponent converges") {
    const MeshLevel& m = *h[3];
    SpaceTimeBox box = unit_box();
    ExponentField p15 = ExponentField::constant(1.5, box);
    ProblemSpec spec = linear_spec();
    spec.flux = prototype_flux(p15, 0.1);
    spec.p = p15;
    spec.f_source = [](double, Vec2 x) { return Vec2{std::sin(3 * x.x), x.y}; };
    FEFunction prev = project_initial(
        [](Vec2 x) { return Vec2{16 * x.x * (1 - x.x) * x.y * (1 - x.y), 0.0}; }, m);
    int iters = 0;
    newton_step_solve(prev, 1.0 / 64.0, spec, 1.0 / 64.0, {30, 1e-10, 1.0}, &iters);
    CHECK(iters <= 15);
  }
}

TEST_CASE("galerkin run and energy ledger") {
  auto h = build_mesh_hierarchy(UnitSquare{}, 4);
  const MeshLevel& m = *h.back();

  SUBCASE("zero data keeps the zero state") {
    ProblemSpec spec = linear_spec();
    auto [state, ledger] = run_galerkin(spec, m, 8);
    for (const auto& u : state.trajectory)
      for (const auto& v : u.values()) CHECK(v.norm() == 0.0);
    for (const auto& row : ledger.rows) {
      CHECK(row.kinetic == 0.0);
      CHECK(row.dissipation == 0.0);
      CHECK(row.work == 0.0);
      CHECK(row.slack == 0.0);
    }
  }
  SUBCASE("kinetic energy decays monotonically without sources") {
    CounterexampleSpec cs;
    RadialCounterexample ce(cs, 512);
    SpaceTimeBox box = unit_box();
    ExponentField p([ce](double, Vec2 x) { return ce.exponent((x - Vec2{0.5, 0.5}).norm() * 2.0); }, box,
                    SampleLattice::tensor(box, 3, 33, 33));
    ProblemSpec spec = linear_spec();
    spec.flux = prototype_flux(p, 0.1);
    spec.p = p;
    spec.u0 = [](Vec2 x) { return Vec2{16 * x.x * (1 - x.x) * x.y * (1 - x.y), 0.0}; };
    auto [state, ledger] = run_galerkin(spec, m, 16);
    double prev_kin = ledger.initial_kinetic;
    for (const auto& row : ledger.rows) {
      CHECK(row.kinetic <= prev_kin * (1.0 + 1e-12));
      CHECK(row.slack >= -1e-8 * (1.0 + ledger.initial_kinetic));
      prev_kin = row.kinetic;
    }
  }
  SUBCASE("ledger slack stays nonnegative with sources and damping") {
    ProblemSpec spec = linear_spec();
    spec.lower = default_lower_order(spec.lower.r, 0.5, LowerOrderMode::linear_damping);
    spec.f_source = [](double t, Vec2 x) { return Vec2{std::sin(2 * t + x.x), std::cos(x.y)}; };
    spec.F_source = [](double, Vec2 x) { return SymTensor2{0.1 * x.x, -0.05, 0.02 * x.y}; };
    spec.u0 = [](Vec2 x) { return Vec2{x.y * (1 - x.y), x.x * (1 - x.x)}; };
    auto [state, ledger] = run_galerkin(spec, m, 16);
    for (const auto& row : ledger.rows) CHECK(row.slack >= -1e-8 * (1.0 + ledger.initial_kinetic));
  }
}

TEST_CASE("manufactured solution error shrinks under refinement") {
  auto h = build_mesh_hierarchy(UnitSquare{}, 5);
  ProblemSpec spec = linear_spec();
  spec.f_source = manufactured_source;
  spec.u0 = [](Vec2 x) { return manufactured_exact(0.0, x); };

  double prev_err = 1e300;
  int K = 4;
  for (int lvl : {2, 3}) {
    auto [state, ledger] = run_galerkin(spec, *h[lvl], K);
    double err = trajectory_l2_error(state, manufactured_exact);
    CHECK(err < prev_err);
    prev_err = err;
    K *= 4;
  }
}

TEST_CASE("summation by parts is exact") {
  auto h = build_mesh_hierarchy(UnitSquare{}, 3);
  const MeshLevel& m = *h.back();
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<FEFunction> u, v;
    for (int k = 0; k <= 9; ++k) {
      u.push_back(random_field(m, rng()));
      v.push_back(random_field(m, rng()));
    }
    double scale = 0.0;
    for (int k = 0; k <= 9; ++k) scale = std::max(scale, std::abs(l2_inner(u[k], v[k])));
    CHECK(std::abs(summation_by_parts_gap(u, v)) <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("coercivity monitor and the Gronwall envelope") {
  auto h = build_mesh_hierarchy(UnitSquare{}, 4);
  const MeshLevel& m = *h.back();

  SUBCASE("zero data gives zero slacks and a trivial envelope") {
    ProblemSpec spec = linear_spec();
    auto [state, ledger] = run_galerkin(spec, m, 8);
    auto mon = bochner_coercivity_monitor(state, ledger, spec, 1.0);
    for (double s : mon.slack) CHECK(s == 0.0);
    CHECK(mon.envelope_holds);
  }
  SUBCASE("envelope dominates seeded runs") {
    double c_pk = fit_poincare_korn_constant(m, 2.0, 40, 99);
    for (std::uint64_t seed : {1u, 2u}) {
      ProblemSpec spec = linear_spec();
      spec.lower = default_lower_order(spec.lower.r, 0.2, LowerOrderMode::linear_damping);
      double amp = 0.5 + 0.25 * seed;
      spec.f_source = [amp](double t, Vec2 x) { return Vec2{amp * std::sin(t + x.x), amp * x.y}; };
      spec.u0 = [amp](Vec2 x) { return Vec2{amp * x.x * (1 - x.x), amp * x.y * (1 - x.y)}; };
      auto [state, ledger] = run_galerkin(spec, m, 12);
      auto mon = bochner_coercivity_monitor(state, ledger, spec, c_pk);
      for (double s : mon.slack) CHECK(s >= -1e-8 * (1.0 + ledger.initial_kinetic));
      CHECK(mon.envelope_holds);
      CHECK(mon.M1 >= mon.max_kinetic_sq);
    }
  }
}

TEST_CASE("convergence study on the nonlinear prototype") {
  auto h = build_mesh_hierarchy(UnitSquare{}, 5);
  SpaceTimeBox box = unit_box(0.5);
  ExponentField p = ExponentField::affine(1.5, 0.4, 0.0, 0.0, box);
  ProblemSpec spec = linear_spec(0.5);
  spec.flux = prototype_flux(p, 0.1);
  spec.p = p;
  spec.u0 = [](Vec2 x) { return Vec2{16 * x.x * (1 - x.x) * x.y * (1 - x.y), 0.0}; };

  std::vector<const MeshLevel*> levels{h[1].get(), h[2].get(), h[3].get(), h[4].get()};
  auto rep = galerkin_convergence_study(spec, levels, 8);
  CHECK(rep.rows.size() == 3);
  CHECK(rep.differences_nonincreasing);
  for (double pn : rep.proxy_norm) CHECK(std::isfinite(pn));
}

TEST_CASE("failure paths carry their module errors") {
  auto h = build_mesh_hierarchy(UnitSquare{}, 3);
  const MeshLevel& m = *h.back();

  SUBCASE("NaN in the flux surfaces as FluxEvalError") {
    ProblemSpec spec = linear_spec();
    spec.flux.evaluate = [](double, Vec2 x, const SymTensor2& A) {
      return x.x > 0.5 ? SymTensor2{std::nan(""), 0, 0} : A;
    };
    FEFunction u = random_field(m, 3);
    CHECK_THROWS_AS(assemble_residual(u, u, 0.1, spec, 0.1), FluxEvalError);
  }
  SUBCASE("non-convergence propagates as NewtonFailure with the step index") {
    ProblemSpec spec = linear_spec();
    spec.u0 = [](Vec2 x) { return Vec2{x.x * (1 - x.x), 0.0}; };
    NewtonConfig strangled{0, 1e-30, 1.0};
    CHECK_THROWS_WITH_AS(run_galerkin(spec, m, 4, strangled), doctest::Contains("step 1"),
                         NewtonFailure);
  }
  SUBCASE("invalid step sizes are rejected") {
    FEFunction u(m);
    CHECK_THROWS_AS(assemble_residual(u, u, 0.0, linear_spec(), 0.1), BadSpec);
    CHECK_THROWS_AS(run_galerkin(linear_spec(), m, 0), BadSpec);
  }
}

TEST_CASE("q-exponent hypothesis is enforced") {
  ProblemSpec spec = linear_spec();
  spec.q = ExponentField::constant(5.0, unit_box());  // p == 2: p_* = 4, bound 3.8
  CHECK_THROWS_AS(spec.validate(SampleLattice::tensor(unit_box(), 4, 8, 8)), ExponentOrderViolation);
}
