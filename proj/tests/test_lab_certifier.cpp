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
#include <numeric>

#include "oracles.hpp"
#include "parreg/certifier.hpp"
#include "parreg/error.hpp"
#include "parreg/lab.hpp"

using namespace parreg;

namespace {

constexpr double kPi = oracle::kPi;
constexpr double kTwoPi = 2.0 * kPi;

Grid grid(int n, int nt, double dt, double l = kTwoPi) {
  Grid g;
  g.nx = g.ny = g.nz = n;
  g.lx = g.ly = g.lz = l;
  g.nt = nt;
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

const IdentityCheck& find(const IdentityReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  FAIL("missing check " << name);
  throw 0;
}

// Small-amplitude Beltrami data on a box of side pi (h = pi/32), sampled
// every 0.005 on [0, 0.4].
SpaceTimeField small_beltrami(double amplitude) {
  return rescale(generate_beltrami(grid(32, 81, 0.02), amplitude, amplitude, amplitude), 2.0);
}

}  // namespace

TEST_CASE("schedule for gamma = 0.1") {
  const auto s = make_schedule(0.1);
  CHECK(s.n == 7);
  CHECK(s.beta == doctest::Approx(1.0 / 42.0));
  CHECK(s.alpha == doctest::Approx(549.1 / 540.0));
  CHECK(s.alpha == doctest::Approx(1.0168519).epsilon(1e-7));
  CHECK(k3_constant() == doctest::Approx(40.0 * std::pow(64.0 * kPi, 0.4)));
  CHECK(k3_constant() == doctest::Approx(333.73).epsilon(1e-4));
  CHECK(s.violated_invariants().empty());
  CHECK(s.eps == doctest::Approx(0.9 * s.eps_bound));
  CHECK(std::pow(s.rho0, s.beta) < 0.5);
  CHECK(s.theta(0.5 * s.rho0) < 0.5);
  for (int j = 1; j <= s.n; ++j) CHECK(s.radius(j, 0.1) < s.radius(j - 1, 0.1));
  CHECK(s.radius(0, 0.1) == doctest::Approx(std::pow(0.1, s.alpha)));
  // eps bound from the configured constants.
  const double k2n = std::pow(2.0, 7), k3 = k3_constant();
  const double bound = std::pow(0.01 / (k2n * k3 + 4.0 * k2n * 2.0 * std::pow(k3, 1.5)), 10.0 / 9.0);
  CHECK(s.eps_bound == doctest::Approx(bound).epsilon(1e-10));
  CHECK(code_of([] { make_schedule(10.0 / 63.0); }) == ErrorCode::Range);
  CHECK(code_of([] { make_schedule(0.0); }) == ErrorCode::Range);
}

TEST_CASE("exact identities for gamma = 1/10") {
  const auto r = check_schedule_identities(1, 10);
  CHECK(r.exact);
  CHECK(r.passed);
  CHECK(r.n == 7);
  CHECK(r.beta == "1/42");
  CHECK(find(r, "identity1").lhs == "37/720");
  CHECK(find(r, "identity1").rhs == "37/720");
  CHECK(find(r, "identity2").lhs == "17/1575");
  CHECK(find(r, "identity1").value == doctest::Approx(0.0513889).epsilon(1e-6));
  CHECK(find(r, "identity2").value == doctest::Approx(0.0107937).epsilon(1e-6));
  const auto d = check_schedule_identities(std::string("0.1"));
  CHECK(d.exact);
  CHECK(d.passed);
  const auto f = check_schedule_identities(std::string("1e-1"));
  CHECK_FALSE(f.exact);
  CHECK(f.passed);
  CHECK(f.n == 7);
  CHECK(code_of([] { check_schedule_identities(std::string("0.1e0x")); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("identity oracle at the boundary values") {
  // gamma = 0 and gamma -> 10/63 are outside the admissible range; the
  // oracle still gives the limiting values.
  const oracle::Frac g0(0);
  CHECK(oracle::str((oracle::Frac(10) - oracle::Frac(63) * g0) * oracle::Frac(1, 72)) == "5/36");
  const auto near = check_schedule_identities(999999, 6300000 + 6);
  CHECK(near.passed);
  CHECK(find(near, "identity2").positive);
  CHECK(code_of([] { check_schedule_identities(10, 63); }) == ErrorCode::Range);
}

TEST_CASE("identities for random rational gamma match the oracle") {
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<long long> den(1, 10000);
  int failures = 0;
  for (int k = 0; k < 1000; ++k) {
    const long long q = den(rng);
    const long long pmax = (10 * q - 1) / 63;  // p/q < 10/63
    if (pmax < 1) {
      --k;
      continue;
    }
    const long long p = std::uniform_int_distribution<long long>(1, pmax)(rng);
    const auto o = oracle::oracle_schedule(p, q);
    const auto r = check_schedule_identities(p, q);
    const bool ok = r.passed && r.n == o.n && o.id1_lhs == o.id1_rhs && o.id2_lhs == o.id2_rhs &&
                    find(r, "identity1").lhs == oracle::str(o.id1_lhs) &&
                    find(r, "identity2").lhs == oracle::str(o.id2_lhs) && o.id1_lhs.n > 0 &&
                    o.id2_lhs.n > 0 && find(r, "identity1").positive &&
                    find(r, "identity2").positive;
    if (!ok) ++failures;
    const auto s = make_schedule(static_cast<double>(p) / q);
    CHECK(s.violated_invariants().empty());
    CHECK(s.n == o.n);
    CHECK(schedule_iterations(p, q) == o.n);
  }
  CHECK(failures == 0);
}

TEST_CASE("lemma reports on closed-form fields") {
  const Grid g = grid(64, 11, 0.1, 2.0);
  LemmaQuery q;
  q.points = {{{1.0, 1.0, 1.0}, 0.5}};
  q.radii = {0.5};
  q.thetas = {0.4};

  const auto zero = generate_constant(g, {0, 0, 0}, 0.0);
  FunctionalEngine ez(zero);
  const auto zi = verify_interpolation(ez, q, 2.0);
  const auto zp = verify_pressure(ez, q, 2.0);
  REQUIRE(zi.samples.size() == 1);
  CHECK(zi.samples[0].k_required == 0.0);
  CHECK(zp.samples[0].k_required == 0.0);
  CHECK(zi.k_required_max == 0.0);
  CHECK(zi.fraction_satisfied == 1.0);

  // |U| = 1: k = (4 pi / 3)^{-1/2} for the interpolation bound.
  const double p0 = 2.0;
  const auto c = generate_constant(g, {0, 1, 0}, p0);
  FunctionalEngine ec(c);
  const auto ci = verify_interpolation(ec, q, 2.0);
  CHECK(ci.samples[0].resolved);
  CHECK(ci.samples[0].k_required == doctest::Approx(1.0 / std::sqrt(4.0 * kPi / 3.0)).epsilon(0.03));
  const double th = 0.4, p32 = std::pow(p0, 1.5);
  const auto cp = verify_pressure(ec, q, 2.0);
  CHECK(cp.samples[0].k_required ==
        doctest::Approx(th * th * th * p32 / (th * p32 + 1.0 / (th * th))).epsilon(0.03));
  CHECK(cp.samples[0].satisfied);

  const auto pz = generate_constant(g, {1, 0, 0}, 0.0);
  FunctionalEngine ep(pz);
  CHECK(verify_pressure(ep, q, 2.0).samples[0].k_required == 0.0);

  // theta r below 2h is reported as unresolved.
  LemmaQuery tiny = q;
  tiny.thetas = {0.1};
  const auto u = verify_interpolation(ec, tiny, 2.0);
  CHECK(u.unresolved == 1);
  CHECK_FALSE(u.samples[0].resolved);
}

TEST_CASE("lemma constants are scale stable") {
  const auto f = generate_beltrami(grid(48, 21, 0.05), 1, 1, 1);
  const auto fr = rescale(f, 2.0);
  FunctionalEngine e(f), er(fr);
  LemmaQuery q, qr;
  q.points = {{{1.0, 2.0, 3.0}, 0.9}};
  q.radii = {0.8};
  q.thetas = {0.4, 0.45};
  qr = q;
  qr.points = {{{0.5, 1.0, 1.5}, 0.225}};
  qr.radii = {0.4};
  for (int lemma = 0; lemma < 2; ++lemma) {
    const auto a = lemma ? verify_pressure(e, q, 2.0) : verify_interpolation(e, q, 2.0);
    const auto b = lemma ? verify_pressure(er, qr, 2.0) : verify_interpolation(er, qr, 2.0);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      CHECK(a.samples[i].k_required > 0.0);
      CHECK(std::isfinite(a.samples[i].k_required));
      CHECK(b.samples[i].k_required == doctest::Approx(a.samples[i].k_required).epsilon(1e-9));
    }
  }
}

TEST_CASE("eps1 criterion") {
  const Grid g = grid(64, 11, 0.1, 2.0);
  const SpacetimePoint z{{1.0, 1.0, 1.0}, 0.8};
  const auto zero = generate_constant(g, {0, 0, 0}, 0.0);
  FunctionalEngine ez(zero);
  for (double eps : {1e-12, 0.01, 1.0}) CHECK(check_ckn_eps1(ez, z, 0.5, eps).passes);

  const auto c = generate_constant(g, {0, 0, 1}, 0.0);
  FunctionalEngine ec(c);
  const auto v = check_ckn_eps1(ec, z, 0.5, 0.6);
  CHECK(v.value == doctest::Approx(kPi / 6.0).epsilon(0.005));
  CHECK(v.passes);
  CHECK_FALSE(check_ckn_eps1(ec, z, 0.5, 0.5).passes);
  CHECK(code_of([&] { check_ckn_eps1(ec, {{1, 1, 1}, 0.1}, 0.5, 1.0); }) == ErrorCode::Domain);

  const SpacetimePoint center{{1.0, 1.0, 1.0}, 0.125};
  const Grid gs = grid(32, 33, 1.0 / 256.0, 2.0);
  double prev = 0.0;
  for (double cap : {4.0, 16.0, 64.0}) {
    const auto f = generate_near_singular(gs, 1.0, center, cap);
    FunctionalEngine e(f);
    const auto r = check_ckn_eps1(e, center, 0.25, 0.01);
    CHECK_FALSE(r.passes);
    CHECK(r.value > prev);
    prev = r.value;
  }
}

TEST_CASE("gradient criterion ladder") {
  const SpacetimePoint z{{3.0, 3.0, 3.0}, 0.9};
  const Grid g = grid(32, 21, 0.05);
  const auto c = generate_constant(g, {1, 2, 3}, 0.0);
  FunctionalEngine ec(c);
  const auto rc = check_gradient_criterion(ec, z, 0.4, 0.01);
  CHECK(rc.passes);
  for (const auto& rung : rc.ladder) CHECK(rung.e == 0.0);
  CHECK(rc.label == "resolution-limited proxy for limsup");

  const auto b = generate_beltrami(grid(64, 21, 0.05), 1, 1, 1);
  FunctionalEngine eb(b);
  const auto rb = check_gradient_criterion(eb, z, 0.2, 0.01, 0.9);
  REQUIRE(rb.ladder.size() >= 2);
  CHECK(rb.non_increasing);
  CHECK(rb.passes);
  // Smooth data: E(r) = O(r^4), so each halving drops E by about 16.
  for (std::size_t i = 1; i < rb.ladder.size(); ++i) {
    CHECK(rb.ladder[i].r == doctest::Approx(0.5 * rb.ladder[i - 1].r));
    CHECK(rb.ladder[i - 1].e / rb.ladder[i].e > 8.0);
  }
  CHECK(code_of([&] { check_gradient_criterion(eb, z, 0.1, 0.01); }) == ErrorCode::Resolution);

  const SpacetimePoint center{{1.0, 1.0, 1.0}, 0.125};
  const auto ns = generate_near_singular(grid(64, 33, 1.0 / 256.0, 2.0), 1.0, center);
  FunctionalEngine en(ns);
  const auto rn = check_gradient_criterion(en, center, 0.0625, 0.01);
  CHECK_FALSE(rn.passes);
  REQUIRE(rn.ladder.size() >= 3);
  // Critical scaling: E does not decay as r shrinks.
  for (std::size_t i = 1; i < rn.ladder.size(); ++i) CHECK(rn.ladder[i].e >= rn.ladder[i - 1].e);
}

TEST_CASE("iteration certificates") {
  const auto s = make_schedule(0.1);
  CHECK(std::exp(s.n * std::log(2.0) + std::log(s.k3)) == doctest::Approx(128.0 * 333.727).epsilon(1e-5));

  SUBCASE("zero field") {
    const auto f = small_beltrami(0.0);
    FunctionalEngine e(f);
    const SpacetimePoint z{{kPi / 2, kPi / 2, kPi / 2}, f.grid().t_end()};
    const auto r = certify_theorem1(e, z, 0.3, s);
    CHECK(r.verdict == Verdict::RegularCertified);
    CHECK(r.hypothesis_lhs == 0.0);
    CHECK(r.final_dc == 0.0);
    CHECK(r.failed_links.empty());
    CHECK(r.term_i_bound / std::exp(0.9 * s.log_eps) == doctest::Approx(128.0 * s.k3));
  }
  SUBCASE("small beltrami") {
    const auto f = small_beltrami(3e-6);
    FunctionalEngine e(f);
    const SpacetimePoint z{{kPi / 2, kPi / 2, kPi / 2}, f.grid().t_end()};
    const auto r = certify_theorem1(e, z, 0.3, s);
    CHECK(r.verdict == Verdict::RegularCertified);
    CHECK(r.hypothesis_lhs < r.hypothesis_rhs);
    CHECK(r.final_dc <= s.constants.zeta);
    CHECK(r.term_i <= r.term_i_bound);
    CHECK(r.term_ii <= r.term_ii_bound);
    CHECK(r.final_dc <= r.final_dc_bound);
    CHECK(r.step1_a_actual <= r.step1_a_bound);
    CHECK(r.step1_e_actual <= r.step1_e_bound);
    CHECK(r.failed_links.empty());
    CHECK(r.radii.size() == 8);
    CHECK(r.rho_below_rho0 == false);
  }
  SUBCASE("hypothesis fails for larger amplitude") {
    const auto f = small_beltrami(5e-6);
    FunctionalEngine e(f);
    const SpacetimePoint z{{kPi / 2, kPi / 2, kPi / 2}, f.grid().t_end()};
    CHECK(certify_theorem1(e, z, 0.3, s).verdict == Verdict::HypothesisFailed);
  }
  SUBCASE("near-singular center") {
    Grid g = grid(32, 81, 0.005, kPi);
    const SpacetimePoint z{{kPi / 2, kPi / 2, kPi / 2}, g.t_end()};
    const auto f = generate_near_singular(g, 1.0, z);
    FunctionalEngine e(f);
    const auto r = certify_theorem1(e, z, 0.3, s);
    CHECK(r.verdict == Verdict::HypothesisFailed);
    CHECK(r.hypothesis_lhs > r.hypothesis_rhs);
  }
  SUBCASE("errors") {
    const auto f = small_beltrami(0.0);
    FunctionalEngine e(f);
    const SpacetimePoint z{{kPi / 2, kPi / 2, kPi / 2}, f.grid().t_end()};
    CHECK(code_of([&] { certify_theorem1(e, z, 0.05, s); }) == ErrorCode::Resolution);
    CHECK(code_of([&] { certify_theorem1(e, {z.x, 0.2}, 0.3, s); }) == ErrorCode::Domain);
    const double rmin = minimal_certifiable_rho(s, f.grid().h_max());
    CHECK(s.radius(s.n, rmin) == doctest::Approx(2.0 * f.grid().h_max()));
  }
}

TEST_CASE("certification is monotone in zeta") {
  for (double amp : {1e-6, 3e-6, 5e-6, 2e-5}) {
    const auto f = small_beltrami(amp);
    FunctionalEngine e(f);
    const SpacetimePoint z{{kPi / 2, kPi / 2, kPi / 2}, f.grid().t_end()};
    bool prev = false;
    for (double zeta : {0.001, 0.01, 0.1, 1.0}) {
      CriteriaConstants k;
      k.zeta = zeta;
      const auto r = certify_theorem1(e, z, 0.3, make_schedule(0.1, k));
      const bool ok = r.verdict == Verdict::RegularCertified;
      if (ok) {
        CHECK(r.final_dc <= zeta);
        CHECK(r.hypothesis_lhs < r.hypothesis_rhs);
      }
      CHECK((ok || !prev));
      prev = ok;
    }
  }
}

TEST_CASE("candidate scan") {
  const SpacetimePoint center{{1.0, 1.0, 1.0}, 0.125};
  const Grid g = grid(32, 33, 1.0 / 256.0, 2.0);
  std::vector<SpacetimePoint> pts;
  for (double x : {0.5, 1.0, 1.5})
    for (double t : {0.1, 0.125}) pts.push_back({{x, 1.0, 1.0}, t});

  ScanCriteria c;
  c.eps1 = true;
  c.gradient = true;
  c.radii = {0.15, 0.2, 0.3};

  const auto zero = generate_constant(g, {0, 0, 0}, 0.0);
  FunctionalEngine ez(zero);
  CHECK(scan_candidates(ez, pts, c).candidates.empty());

  const auto ns = generate_near_singular(g, 1.0, center);
  FunctionalEngine en(ns);
  const auto rn = scan_candidates(en, pts, c);
  bool found = false;
  for (const auto& p : rn.candidates)
    if (p.x == center.x && p.t == center.t) found = true;
  CHECK(found);
  for (std::size_t i = 1; i < rn.points.size(); ++i) {
    const auto& a = rn.points[i - 1].z;
    const auto& b = rn.points[i].z;
    CHECK(std::tie(a.x[0], a.x[1], a.x[2], a.t) < std::tie(b.x[0], b.x[1], b.x[2], b.t));
  }

  // Enlarging eps1 never shrinks the passing set.
  ScanCriteria only = c;
  only.gradient = false;
  std::size_t prev_pass = 0;
  for (double eps1 : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    only.constants.eps1 = eps1;
    const auto r = scan_candidates(en, pts, only);
    std::size_t pass = 0;
    for (const auto& p : r.points) pass += p.eps1_pass.value_or(false);
    CHECK(pass >= prev_pass);
    prev_pass = pass;
  }

  const auto sb = small_beltrami(3e-6);
  FunctionalEngine eb(sb);
  std::vector<SpacetimePoint> bp{{{1.0, 1.0, 1.0}, 0.4}, {{2.0, 0.5, 1.5}, 0.35}};
  ScanCriteria all = c;
  all.theorem1 = true;
  all.radii = {0.3};
  all.threads = 2;
  const auto rb = scan_candidates(eb, bp, all);
  CHECK(rb.candidates.empty());
  CHECK(rb.skipped == 0);
}
