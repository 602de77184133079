// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "parex/errors.hpp"
#include "parex/inequalities.hpp"
#include "parex/spaces.hpp"

using namespace parex;

namespace {

std::vector<FEFunction> random_fields(const MeshLevel& mesh, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<FEFunction> out;
  for (int f = 0; f < n; ++f) {
    FEFunction u(mesh);
    for (int i = 0; i < mesh.n_vertices(); ++i)
      if (!mesh.boundary[i]) u.set_value(i, {dist(rng), dist(rng)});
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace

TEST_CASE("mollified indicator: plateau, support and gradient peak") {
  CounterexampleSpec cs;
  RadialCounterexample ce(cs);

  SUBCASE("plateau value is 1") {
    for (double r : {0.0, 0.2, 0.45, 0.59}) CHECK(std::abs(ce.eta(r) - 1.0) <= 1e-6);
  }
  SUBCASE("support ends at 1 + eps") {
    CHECK(ce.eta(1.41) == 0.0);
    CHECK(ce.eta(1.39) >= 0.0);
    CHECK(ce.eta(2.0) == 0.0);
  }
  SUBCASE("gradient peaks near the indicator radius, FD oracle to 1%") {
    double rstar = ce.arg_max_grad();
    CHECK(rstar > 0.8);
    CHECK(rstar < 1.2);
    // independent central-difference oracle on the eta profile itself
    double h = 1e-4;
    double fd_max = 0.0;
    for (double r = 0.6; r <= 1.4; r += 1e-3)
      fd_max = std::max(fd_max, std::abs(ce.eta(r + h) - ce.eta(r - h)) / (2 * h));
    CHECK(ce.max_grad() == doctest::Approx(fd_max).epsilon(0.01));
  }
  SUBCASE("support containment violations are rejected") {
    CounterexampleSpec bad = cs;
    bad.plateau_radius = 0.7;  // 0.7 + 0.4 > 1
    CHECK_THROWS_AS(RadialCounterexample{bad}, BadSpec);
  }
}

TEST_CASE("exponent profile matches the construction") {
  CounterexampleSpec cs;
  RadialCounterexample ce(cs, 1024);
  CHECK(ce.exponent(0.0) == doctest::Approx(2.0));
  CHECK(ce.exponent(0.59) == doctest::Approx(2.0));
  CHECK(ce.exponent(0.95) == doctest::Approx(1.1));
  CHECK(ce.exponent(1.2) == doctest::Approx(1.1));
  CHECK(ce.exponent(2.4) == doctest::Approx(1.1));
  // monotone ramp in between
  double prev = 2.0;
  for (double r = 0.6; r <= 0.9; r += 0.01) {
    CHECK(ce.exponent(r) <= prev + 1e-12);
    prev = ce.exponent(r);
  }
}

TEST_CASE("time profile integrability: phi in L^{1.1} but not L^2") {
  CounterexampleSpec cs;
  RadialCounterexample ce(cs, 256);
  // rho_{p^-}(phi_tau u) converges as tau -> 0 (increments shrink like
  // tau^{0.45}); the analytic limit of the time factor is 1/0.45
  std::vector<double> taus{1e-2, 1e-4, 1e-6, 1e-8};
  auto tab = ce.truncation_table(taus);
  double last_increment = tab[3].rho_u_pminus - tab[2].rho_u_pminus;
  CHECK(last_increment >= 0.0);
  CHECK(last_increment <= 1e-2 * tab[3].rho_u_pminus);
  // while rho_p(phi_tau u) keeps growing by a steady amount per decade
  CHECK(tab[3].rho_u - tab[2].rho_u >= 0.8 * (tab[2].rho_u - tab[1].rho_u));
}

TEST_CASE("divergence certificate on the truncation table") {
  CounterexampleSpec cs;
  RadialCounterexample ce(cs);
  std::vector<double> taus;
  for (int k = 1; k <= 5; ++k) taus.push_back(std::pow(10.0, -k));
  auto tab = ce.truncation_table(taus);

  // plateau coefficient: integral of eta^2 over the plateau is pi * 0.36
  double plateau = M_PI * cs.plateau_radius * cs.plateau_radius;
  double ln10 = std::log(10.0);

  // stable increments approaching the analytic constant over two decades
  double inc4 = tab[3].rho_u - tab[2].rho_u;
  double inc5 = tab[4].rho_u - tab[3].rho_u;
  CHECK(std::abs(inc4 / inc5 - 1.0) <= 0.10);
  CHECK(std::abs(inc5 / (plateau * ln10) - 1.0) <= 0.10);
  CHECK(std::abs(inc4 / (plateau * ln10) - 1.0) <= 0.10);

  // gradient increments decay at the analytic tau^{1 - p^-/2} rate
  double ginc4 = tab[3].rho_grad - tab[2].rho_grad;
  double ginc5 = tab[4].rho_grad - tab[3].rho_grad;
  CHECK(ginc5 / ginc4 == doctest::Approx(std::pow(10.0, -0.45)).epsilon(0.05));
  double ginc1 = tab[1].rho_grad - tab[0].rho_grad;
  CHECK(ginc5 <= ginc1 / 20.0);
}

TEST_CASE("slice-wise failure and repair") {
  CounterexampleSpec cs;
  RadialCounterexample ce(cs, 1024);

  SUBCASE("naive Poincare ratio blows past 1e3 while the repair stays bounded") {
    double naive_late = 0.0;
    double repaired_max = 0.0;
    for (double t : {1e-2, 1e-4, 1e-6, 1e-8, 1e-9}) {
      auto s = ce.slice(t, 0.2);
      double naive = s.rho_u / s.rho_eps;
      double repaired = s.rho_u / (1.0 + s.rho_eps + s.y_norm * s.y_norm);
      naive_late = std::max(naive_late, naive);
      repaired_max = std::max(repaired_max, repaired);
    }
    CHECK(naive_late > 1e3);
    CHECK(repaired_max < 1.0);
  }
}

TEST_CASE("repaired Poincare: calibrate on one batch, validate on another") {
  auto h = build_mesh_hierarchy(UnitSquare{}, 4);
  const MeshLevel& mesh = *h.back();
  SpaceTimeBox box = SpaceTimeBox::unit_cylinder();
  ExponentField p = ExponentField::affine(1.4, 0.5, 0.0, 0.1, box);

  auto calib = random_trajectory_slices(mesh, p, 0.2, 40, 4, 2024);
  auto valid = random_trajectory_slices(mesh, p, 0.2, 40, 4, 4048);

  RepairConstants rc = fit_repair_constants(calib);
  CHECK(rc.c > 0.0);
  InequalityReport rep = poincare_repair_check(valid, rc);
  CHECK(rep.pass);
  CHECK(rep.worst_ratio <= rc.c);

  SUBCASE("zero field contributes a zero ratio") {
    std::vector<SliceSample> z{{0.0, 0.0, 0.0, 0.0}};
    InequalityReport rz = poincare_repair_check(z, rc);
    CHECK(rz.worst_ratio == 0.0);
    CHECK(rz.pass);
  }
  SUBCASE("counterexample truncations satisfy the repaired inequality") {
    // calibrate with shallow truncations included, validate on deeper ones
    CounterexampleSpec cs;
    RadialCounterexample ce(cs, 1024);
    auto cal_plus = calib;
    for (double t : {1e-1, 1e-3, 1e-5, 1e-7}) {
      auto s = ce.slice(t, 0.2);
      cal_plus.push_back({s.rho_u, s.rho_eps, s.rho_u_star, s.y_norm});
    }
    RepairConstants merged = fit_repair_constants(cal_plus);
    std::vector<SliceSample> slices;
    for (double t : {1e-2, 1e-4, 1e-6, 1e-8, 1e-9}) {
      auto s = ce.slice(t, 0.2);
      slices.push_back({s.rho_u, s.rho_eps, s.rho_u_star, s.y_norm});
    }
    InequalityReport rce = poincare_repair_check(slices, merged);
    CHECK(rce.pass);
    // while the un-repaired slice ratio blows up by orders of magnitude
    CHECK(slices.back().rho_u / slices.back().rho_eps > 1e3);
  }
}

TEST_CASE("variable interpolation inequality and the L4 cross-check") {
  auto h = build_mesh_hierarchy(UnitSquare{}, 4);
  const MeshLevel& mesh = *h.back();
  SpaceTimeBox box = SpaceTimeBox::unit_cylinder();

  SUBCASE("calibrate-validate on the affine exponent") {
    ExponentField p = ExponentField::affine(1.4, 0.5, 0.0, 0.1, box);
    auto calib = random_trajectory_slices(mesh, p, 0.2, 40, 4, 7);
    auto valid = random_trajectory_slices(mesh, p, 0.2, 40, 4, 8);
    RepairConstants rc = fit_interpolation_constants(calib);
    InequalityReport rep = variable_interpolation_check(valid, rc);
    CHECK(rep.pass);
  }
  SUBCASE("p == 2 reduces to the L4 interpolation, consistent with GN") {
    ExponentField two = ExponentField::constant(2.0, box);
    // rho_u_star with eps_star = 0 would be the L4 modular; use a small slack
    auto slices = random_trajectory_slices(mesh, two, 1e-6, 20, 3, 9);
    auto fields = random_fields(mesh, 20, 10);

    RepairConstants rc = fit_interpolation_constants(slices);
    InequalityReport interp = variable_interpolation_check(slices, rc);
    CHECK(interp.pass);

    // same content through the Gagliardo-Nirenberg route: theta = 1/2,
    // s = r = d = 2 gives q = 4
    double frozen = 1.5 * gn_worst_ratio(fields, 2.0, 2.0, 0.5);
    InequalityReport gn = gn_check(fields, 2.0, 2.0, 0.5, frozen);
    CHECK(gn.pass);
  }
}

TEST_CASE("Korn ratios are bounded") {
  auto h = build_mesh_hierarchy(UnitSquare{}, 4);
  const MeshLevel& mesh = *h.back();
  auto calib = random_fields(mesh, 30, 55);
  auto valid = random_fields(mesh, 30, 66);

  for (double s : {1.5, 2.0, 3.0}) {
    double frozen = 1.5 * korn_worst_ratio(calib, s);
    CHECK(std::isfinite(frozen));
    InequalityReport rep = korn_check(valid, s, frozen);
    CHECK(rep.pass);
  }

  SUBCASE("rigid rotation with boundary correction has finite ratio") {
    FEFunction u = FEFunction::interpolate(mesh, [](Vec2 x) { return Vec2{x.y, -x.x}; });
    std::vector<FEFunction> one{u};
    CHECK(std::isfinite(korn_worst_ratio(one, 2.0)));
  }
  SUBCASE("zero-strain zero-trace fields are only zero (vacuous ratio)") {
    CHECK(korn_rigidity_holds(mesh));
  }
}

TEST_CASE("Gagliardo-Nirenberg endpoints") {
  auto h = build_mesh_hierarchy(UnitSquare{}, 4);
  auto fields = random_fields(*h.back(), 20, 77);

  SUBCASE("theta = 0 collapses to q = s with constant 1") {
    for (const auto& u : fields) {
      std::vector<FEFunction> one{u};
      // ratio = ||u||_s / (||u||_s + ||u||_s) = 1/2 exactly
      CHECK(gn_worst_ratio(one, 2.0, 2.0, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
  SUBCASE("random sweep with frozen constants") {
    auto calib = random_fields(*h.back(), 20, 88);
    for (auto [s, r, theta] : {std::tuple{2.0, 2.0, 0.5}, {2.0, 1.5, 0.4}, {1.5, 2.0, 0.3}}) {
      double frozen = 1.5 * gn_worst_ratio(calib, s, r, theta);
      CHECK(gn_check(fields, s, r, theta, frozen).pass);
    }
  }
}

TEST_CASE("exponent-order consistency of the q hypothesis") {
  // p_*(t,x) - eps must dominate the q used by solver specs
  CounterexampleSpec cs;
  RadialCounterexample ce(cs, 512);
  ExponentField p = ce.exponent_field();
  double eps_star = 0.2;
  SampleLattice lat = SampleLattice::tensor(p.domain(), 4, 33, 33);
  for (const auto& z : lat.points()) {
    double bound = std::max(2.0, parabolic_star(p(z), 2) - eps_star);
    CHECK(bound >= 2.0);  // q == 2 is always admissible
  }
}
