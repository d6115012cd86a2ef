// Copyright 2026 The parreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "parreg/error.hpp"
#include "parreg/field.hpp"
#include "parreg/functionals.hpp"

using namespace parreg;

namespace {

constexpr double kPi = oracle::kPi;
constexpr double kTwoPi = 2.0 * kPi;

Grid grid(int n, int nt, double dt, double l = kTwoPi, double t0 = 0.0) {
  Grid g;
  g.nx = g.ny = g.nz = n;
  g.lx = g.ly = g.lz = l;
  g.nt = nt;
  g.t0 = t0;
  g.dt = dt;
  return g;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

// Beltrami pressure: -|U|^2/2 + (3/2) e^{-2t}.
double beltrami_p(double x, double y, double z, double t) {
  return -0.5 * oracle::beltrami_u2(x, y, z, t) + 1.5 * std::exp(-2.0 * t);
}

}  // namespace

TEST_CASE("cube plane fraction against Monte Carlo") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    double m[3] = {u(rng), u(rng), u(rng)};
    const double sum = m[0] + m[1] + m[2];
    for (double& v : m) v /= sum;
    const double alpha = u(rng);
    int inside = 0;
    const int samples = 200000;
    for (int k = 0; k < samples; ++k)
      if (m[0] * u(rng) + m[1] * u(rng) + m[2] * u(rng) <= alpha) ++inside;
    const double mc = static_cast<double>(inside) / samples;
    CHECK(cube_plane_fraction(m[0], m[1], m[2], alpha) == doctest::Approx(mc).epsilon(0).scale(1).epsilon(0.005));
  }
  CHECK(cube_plane_fraction(1, 0, 0, 0.3) == doctest::Approx(0.3));
  CHECK(cube_plane_fraction(0.5, 0.5, 0, 0.5) == doctest::Approx(0.5));
  CHECK(cube_plane_fraction(1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3) == doctest::Approx(1.0 / 6));
  CHECK(cube_plane_fraction(0.2, 0.3, 0.5, -0.1) == 0.0);
  CHECK(cube_plane_fraction(0.2, 0.3, 0.5, 1.1) == 1.0);
}

TEST_CASE("ball stencil volume converges to the ball volume") {
  double prev = 1.0;
  for (int n : {16, 32, 64}) {
    const Grid g = grid(n, 2, 1.0, 2.0);
    double vol = 0.0;
    for (const auto& w : ball_stencil(g, {1.01, 0.97, 1.003}, 0.5)) vol += w.weight;
    const double err = std::abs(vol / (4.0 / 3.0 * kPi * 0.125) - 1.0);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-3);
  // Disjoint balls never share a cell under the cell-center rule.
  const Grid g = grid(32, 2, 1.0, 2.0);
  auto a = ball_stencil(g, {0.5, 0.5, 0.5}, 0.3, BallRule::CellCenter);
  auto b = ball_stencil(g, {1.1, 0.5, 0.5}, 0.3, BallRule::CellCenter);
  for (const auto& x : a)
    for (const auto& y : b) CHECK(x.index != y.index);
  CHECK(code_of([&] { ball_stencil(g, {1, 1, 1}, 1.0); }) == ErrorCode::Geometry);
}

TEST_CASE("time weights integrate piecewise-linear data exactly") {
  const Grid g = grid(4, 11, 0.1);
  auto w = time_weights(g, 0.13, 0.77);
  double sum = 0.0, lin = 0.0;
  for (const auto& x : w) {
    sum += x.weight;
    lin += x.weight * (2.0 * g.time(x.n) + 1.0);
  }
  CHECK(sum == doctest::Approx(0.64));
  CHECK(lin == doctest::Approx(0.77 * 0.77 - 0.13 * 0.13 + 0.64));
  CHECK(time_weights(g, 0.3, 0.3).empty() == true);
}

TEST_CASE("constant-field closed forms") {
  // Box side 2 on 64^3 gives h/r = 1/16.
  const Grid g = grid(64, 5, 0.1, 2.0);
  const auto f = generate_constant(g, {0.6, 0.0, 0.8}, 4.0);
  FunctionalEngine eng(f);
  const double r = 0.5;
  const SpacetimePoint z{{1.013, 0.979, 1.007}, 0.3};
  const auto v = eng.evaluate(z, r);
  CHECK(v.a == doctest::Approx(4.0 / 3.0 * kPi * r * r).epsilon(0.005));
  CHECK(v.c == doctest::Approx(kPi / 6.0).epsilon(0.005));
  CHECK(v.d == doctest::Approx(4.0 / 3.0 * kPi).epsilon(0.005));
  CHECK(v.e == 0.0);
  CHECK(std::abs(v.a - kPi / 3.0) <= v.err_a);
  CHECK(std::abs(v.c - kPi / 6.0) <= v.err_c);

  const auto u1 = generate_constant(g, {1, 0, 0}, 0.0);
  FunctionalEngine e1(u1);
  CHECK(e1.theorem1_lhs(z, r).value == doctest::Approx(kPi / 24.0).epsilon(0.005));
  CHECK(e1.D(z, r) == 0.0);

  const auto zero = generate_constant(g, {0, 0, 0}, 0.0);
  FunctionalEngine e0(zero);
  const auto v0 = e0.evaluate(z, r);
  CHECK(v0.a == 0.0);
  CHECK(v0.e == 0.0);
  CHECK(v0.c == 0.0);
  CHECK(v0.d == 0.0);
  CHECK(e0.theorem1_lhs(z, r).value == 0.0);
}

TEST_CASE("beltrami functionals against the Gauss-Legendre oracle") {
  // h/r = 0.16; the plane-cut error is second order in h/r.
  const Grid g = grid(96, 7, 0.05);
  const auto f = generate_beltrami(g, 1, 1, 1);
  FunctionalEngine eng(f);
  const double r = 0.4, t = 0.3;
  const SpacetimePoint z{{0.0, 0.0, 0.0}, t};
  const std::array<double, 3> c{0.0, 0.0, 0.0};
  const auto v = eng.evaluate(z, r);

  // A: the ball integral decays in time, so the sup sits at s = t - r^2.
  const double ball0 =
      oracle::cylinder_integral([](double x, double y, double zz, double) {
        return oracle::beltrami_u2(x, y, zz, 0.0);
      }, c, r, 0.0, 1.0, 24, 24, 48, 1);
  const double a_ref = ball0 * std::exp(-2.0 * (t - r * r)) / r;
  CHECK(v.a == doctest::Approx(a_ref).epsilon(0.01));

  const double e_ref = oracle::cylinder_integral(oracle::beltrami_grad2, c, r, t - r * r, t) / r;
  CHECK(v.e == doctest::Approx(e_ref).epsilon(0.01));
  const double c_ref = oracle::cylinder_integral(
                           [](double x, double y, double zz, double s) {
                             return std::pow(oracle::beltrami_u2(x, y, zz, s), 1.5);
                           },
                           c, r, t - r * r, t) /
                       (r * r);
  CHECK(v.c == doctest::Approx(c_ref).epsilon(0.01));
  const double d_ref = oracle::cylinder_integral(
                           [](double x, double y, double zz, double s) {
                             return std::pow(std::abs(beltrami_p(x, y, zz, s)), 1.5);
                           },
                           c, r, t - r * r, t) /
                       (r * r);
  CHECK(v.d == doctest::Approx(d_ref).epsilon(0.01));
  const double t1_ref = oracle::cylinder_integral(
      [](double x, double y, double zz, double s) {
        return oracle::beltrami_grad2(x, y, zz, s) +
               std::pow(oracle::beltrami_u2(x, y, zz, s), 5.0 / 3.0) +
               std::pow(std::abs(beltrami_p(x, y, zz, s)), 5.0 / 3.0);
      },
      c, r, t - r * r, t);
  CHECK(eng.theorem1_lhs(z, r).value == doctest::Approx(t1_ref).epsilon(0.01));
  CHECK(eval_theorem1_lhs(f, z, r) == doctest::Approx(t1_ref).epsilon(0.01));
  CHECK(eval_C(f, z, r) == v.c);
  CHECK(eval_A(f, z, r) == v.a);

  // Cylinder mode: window (t - r^2, t], same sup for decaying data.
  CHECK(eng.A(z, r, TimeWindowMode::Cylinder) == doctest::Approx(a_ref).epsilon(0.01));
}

TEST_CASE("quadrature error drops under refinement and is bounded by the estimate") {
  const std::array<double, 3> c{1.1, 2.3, 3.7};
  const double t = 0.45, r = 0.6;
  const double c_ref = oracle::cylinder_integral(
                           [](double x, double y, double zz, double s) {
                             return std::pow(oracle::beltrami_u2(x, y, zz, s), 1.5);
                           },
                           c, r, t - r * r, t, 40, 40, 80, 20) /
                       (r * r);
  std::vector<double> errs;
  for (int n : {16, 32, 64}) {
    const double dt = 0.04 * 16 / n;
    const Grid g = grid(n, static_cast<int>(std::round(0.5 / dt)) + 1, dt);
    const auto f = generate_beltrami(g, 1, 1, 1);
    FunctionalEngine eng(f);
    const auto v = eng.evaluate({{c[0], c[1], c[2]}, t}, r);
    errs.push_back(std::abs(v.c - c_ref));
    CHECK(errs.back() <= v.err_c);
  }
  CHECK(errs[0] / errs[1] >= 3.0);
  CHECK(errs[1] / errs[2] >= 3.0);
}

TEST_CASE("shear flow dissipation closed form") {
  const Grid g = grid(32, 6, 0.05);
  const std::size_t s = g.spatial_size();
  std::vector<double> u(3 * s * g.nt, 0.0), p(s * g.nt, 0.0);
  for (int n = 0; n < g.nt; ++n)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        for (int k = 0; k < g.nz; ++k) u[3 * n * s + g.index(i, j, k)] = std::sin(j * g.hy());
  const SpaceTimeField f(g, u, p);
  const double r = 0.4, t = 0.25;
  const std::array<double, 3> c{2.0, 1.0, 3.0};
  const double ref = oracle::cylinder_integral(
                         [](double, double y, double, double) { return std::cos(y) * std::cos(y); },
                         c, r, t - r * r, t) /
                     r;
  CHECK(eval_E(f, {{c[0], c[1], c[2]}, t}, r) == doctest::Approx(ref).epsilon(0.01));
}

TEST_CASE("nested cylinders give monotone integrals") {
  const Grid g = grid(32, 21, 0.05);
  const auto f = generate_beltrami(g, 1, 0.5, 0.2);
  FunctionalEngine eng(f);
  const SpacetimePoint z{{1.0, 2.0, 0.5}, 0.9};
  double prev_c = 0.0, prev_d = 0.0;
  for (double r = 0.25; r <= 0.9; r += 0.05) {
    const double cc = r * r * eng.C(z, r), dd = r * r * eng.D(z, r);
    CHECK(cc >= prev_c);
    CHECK(dd >= prev_d);
    prev_c = cc;
    prev_d = dd;
  }
}

TEST_CASE("scaling invariance") {
  const Grid g = grid(32, 21, 0.05);
  const auto f = generate_beltrami(g, 1, 1, 1);
  FunctionalEngine eng(f);
  const std::vector<SpacetimePoint> pts{{{1.0, 2.0, 3.0}, 0.8}, {{4.0, 0.5, 5.5}, 0.6}};
  for (double lambda : {0.5, 2.0}) {
    const auto fr = rescale(f, lambda);
    FunctionalEngine er(fr);
    for (const auto& z : pts)
      for (double r : {0.5, 0.7}) {
        const auto v = eng.evaluate(z, r);
        const SpacetimePoint zs{{z.x[0] / lambda, z.x[1] / lambda, z.x[2] / lambda},
                                z.t / (lambda * lambda)};
        const auto w = er.evaluate(zs, r / lambda);
        CHECK(std::abs(w.a - v.a) <= 10.0 * v.err_a + 1e-12);
        CHECK(std::abs(w.e - v.e) <= 10.0 * v.err_e + 1e-12);
        CHECK(std::abs(w.c - v.c) <= 10.0 * v.err_c + 1e-12);
        CHECK(std::abs(w.d - v.d) <= 10.0 * v.err_d + 1e-12);
      }
  }
}

TEST_CASE("magnetic functionals") {
  const Grid g = grid(16, 6, 0.05);
  const SpacetimePoint z{{3.0, 3.0, 3.0}, 0.2};
  const double r = 0.8;

  const auto hydro = generate_beltrami(g, 1, 1, 1);
  const auto mhd0 = generate_beltrami_mhd(g, 1, 1, 1, 0.0);
  for (double v : mhd0.b()) REQUIRE(v == 0.0);
  FunctionalEngine eh(hydro), em(mhd0);
  const auto a = eh.evaluate(z, r);
  const auto b = em.evaluate_mhd(z, r);
  CHECK(a.a == b.a);
  CHECK(a.e == b.e);
  CHECK(a.c == b.c);
  CHECK(a.d == b.d);
  CHECK(code_of([&] { eh.evaluate_mhd(z, r); }) == ErrorCode::Configuration);

  const std::size_t s = g.spatial_size();
  std::vector<double> zero(3 * s * g.nt, 0.0), p(s * g.nt, 0.0), ones(3 * s * g.nt, 0.0);
  for (int n = 0; n < g.nt; ++n)
    for (std::size_t q = 0; q < s; ++q) ones[(3 * n + 2) * s + q] = 1.0;
  const Grid g2 = grid(64, 5, 0.1, 2.0);
  const std::size_t s2 = g2.spatial_size();
  std::vector<double> z2(3 * s2 * g2.nt, 0.0), p2(s2 * g2.nt, 0.0), b2 = z2;
  for (int n = 0; n < g2.nt; ++n)
    for (std::size_t q = 0; q < s2; ++q) b2[(3 * n) * s2 + q] = 1.0;
  const SpaceTimeField fb(g2, z2, p2, b2);
  FunctionalEngine eb(fb);
  CHECK(eb.evaluate_mhd({{1.0, 1.0, 1.0}, 0.3}, 0.5).c == doctest::Approx(kPi / 6.0).epsilon(0.005));

  // Swapping U and B leaves A, E, C unchanged.
  const auto m = generate_beltrami_mhd(g, 1, 0.7, 0.4, 0.6);
  const std::vector<double> mu(m.u().begin(), m.u().end()), mb(m.b().begin(), m.b().end()),
      mp(m.p().begin(), m.p().end());
  const SpaceTimeField sw(g, mb, mp, mu);
  FunctionalEngine e1(m), e2(sw);
  const auto v1 = e1.evaluate_mhd(z, r), v2 = e2.evaluate_mhd(z, r);
  CHECK(v1.a == doctest::Approx(v2.a).epsilon(1e-12));
  CHECK(v1.e == doctest::Approx(v2.e).epsilon(1e-12));
  CHECK(v1.c == doctest::Approx(v2.c).epsilon(1e-12));
  CHECK(v1.d == v2.d);
}

TEST_CASE("functional domain and geometry errors") {
  const Grid g = grid(16, 6, 0.05);
  const auto f = generate_beltrami(g, 1, 1, 1);
  FunctionalEngine eng(f);
  CHECK(code_of([&] { eng.C({{1, 1, 1}, 0.2}, 3.2); }) == ErrorCode::Geometry);
  CHECK(code_of([&] { eng.C({{1, 1, 1}, -1.0}, 0.5); }) == ErrorCode::Domain);
  CHECK(code_of([&] { eng.A({{1, 1, 1}, 5.0}, 0.5); }) == ErrorCode::Domain);
}

TEST_CASE("test function profile") {
  const SpacetimePoint z{{1.0, 2.0, 3.0}, 1.2};
  for (auto order : {BumpOrder::C2, BumpOrder::C3}) {
    const auto phi = TestFunction::build(z, 0.5, order);
    CHECK(phi.sampled_derivative_bound() <= 10.0);
    CHECK(phi.q_out() < 2.0);
    CHECK(phi.tau_out() < 4.0);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.2, 1.2), ts(-1.2, 0.0);
    for (int k = 0; k < 2000; ++k) {
      const Vec3 off{u(rng), u(rng), u(rng)};
      const double s = z.t + ts(rng);
      const double v = phi.value(off, s);
      const double d = std::sqrt(off[0] * off[0] + off[1] * off[1] + off[2] * off[2]);
      CHECK(v >= 0.0);
      if (d < 0.5 && z.t - s < 0.25) CHECK(v >= 1.0);
      if (d >= 1.0 || z.t - s >= 1.0) CHECK(v == 0.0);
    }
  }
  // Independent finite-difference check of the scaled derivative bound.
  const auto phi = TestFunction::build(z, 1.0);
  double worst = 0.0;
  const double h = 1e-4;
  for (int a = 0; a <= 200; ++a)
    for (int b = 0; b <= 200; ++b) {
      const double q = 2.0 * a / 200, tau = 4.0 * b / 200;
      const double e = phi.eta(q), c = phi.chi(tau);
      const double e1 = (phi.eta(q + h) - phi.eta(std::max(q - h, 0.0))) / (q > h ? 2 * h : h);
      const double e2 = q > h ? (phi.eta(q + h) - 2 * e + phi.eta(q - h)) / (h * h) : 0.0;
      const double c1 = (phi.chi(tau + h) - phi.chi(tau - h)) / (2 * h);
      // Hessian of a radial function: eigenvalues eta'' and eta'/q (twice).
      const double hess = q > 1e-3 ? std::sqrt(e2 * e2 + 2.0 * (e1 / q) * (e1 / q)) : 0.0;
      worst = std::max(worst, std::abs(e * c1) + std::abs(c) * hess + e1 * e1 * c * c);
    }
  CHECK(worst <= 10.0 * 1.001);
  CHECK(code_of([&] { TestFunction(z, 0.5, 2.5, 3.0); }) != ErrorCode::Internal);
}

TEST_CASE("local energy residual") {
  const SpacetimePoint z{{1.0, 2.0, 3.0}, 1.2};
  const auto phi = TestFunction::build(z, 0.5);
  {
    const auto f = generate_constant(grid(16, 66, 0.02), {0, 0, 0}, 0.0);
    FunctionalEngine e(f);
    CHECK(e.energy_residual(phi, 1.2) == 0.0);
  }
  std::vector<double> res;
  for (int n : {16, 32}) {
    const double dt = 0.02 * 32 / n;
    const auto f = generate_beltrami(grid(n, static_cast<int>(std::round(1.3 / dt)) + 1, dt), 1, 1, 1);
    FunctionalEngine e(f);
    res.push_back(e.energy_residual(phi, 1.2));
    CHECK(res.back() <= 1e-3);
  }
  CHECK(std::abs(res[0]) / std::abs(res[1]) >= 3.0);
  const auto f = generate_beltrami(grid(16, 11, 0.05, kTwoPi, 0.5), 1, 1, 1);
  FunctionalEngine e(f);
  CHECK(code_of([&] { e.energy_residual(phi, 1.0); }) == ErrorCode::Domain);
}
