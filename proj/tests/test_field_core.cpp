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
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "oracles.hpp"
#include "parreg/error.hpp"
#include "parreg/field.hpp"
#include "parreg/functionals.hpp"
#include "parreg/nsst_io.hpp"
#include "parreg/spectral.hpp"

using namespace parreg;
namespace fs = std::filesystem;

namespace {

Grid box_grid(int n, int nt = 3, double dt = 0.1, double l = 2.0 * oracle::kPi) {
  Grid g;
  g.nx = g.ny = g.nz = n;
  g.lx = g.ly = g.lz = l;
  g.nt = nt;
  g.t0 = 0.0;
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

double slice_integral(const SpaceTimeField& f, int n) {
  const auto& g = f.grid();
  double s = 0.0;
  for (int c = 0; c < 3; ++c)
    for (double v : f.u_slice(n, c)) s += v * v;
  return s * g.cell_volume();
}

}  // namespace

TEST_CASE("grid invariants") {
  Grid g = box_grid(8);
  CHECK_NOTHROW(g.validate());
  for (auto mutate : std::vector<std::function<void(Grid&)>>{
           [](Grid& x) { x.nx = 3; }, [](Grid& x) { x.nz = 0; }, [](Grid& x) { x.nt = 1; },
           [](Grid& x) { x.dt = 0.0; }, [](Grid& x) { x.ly = -1.0; }}) {
    Grid bad = g;
    mutate(bad);
    CHECK(code_of([&] { bad.validate(); }) == ErrorCode::Configuration);
  }
  CHECK(g.hx() == doctest::Approx(2.0 * oracle::kPi / 8));
  CHECK(g.t_end() == doctest::Approx(0.2));
}

TEST_CASE("beltrami energy integral matches quadrature oracle") {
  const Grid g = box_grid(16, 3, 0.25);
  const auto f = generate_beltrami(g, 1, 1, 1);
  for (int n = 0; n < g.nt; ++n) {
    const double t = g.time(n);
    const double closed = 3.0 * std::pow(2.0 * oracle::kPi, 3) * std::exp(-2.0 * t);
    // Independent tensor Gauss-Legendre quadrature of |U|^2 over the box.
    const auto rule = oracle::gauss_legendre(20);
    double q = 0.0;
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j)
        for (int k = 0; k < 20; ++k) {
          const double x = (rule.x[i] + 1) * oracle::kPi, y = (rule.x[j] + 1) * oracle::kPi,
                       z = (rule.x[k] + 1) * oracle::kPi;
          q += rule.w[i] * rule.w[j] * rule.w[k] * std::pow(oracle::kPi, 3) *
               oracle::beltrami_u2(x, y, z, t);
        }
    CHECK(q == doctest::Approx(closed).epsilon(1e-10));
    CHECK(slice_integral(f, n) == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("beltrami pointwise values and pressure") {
  const Grid g = box_grid(8);
  const auto f = generate_beltrami(g, 1, 0, 0);
  const std::size_t s = g.spatial_size();
  CHECK(f.u()[0] == doctest::Approx(0.0));
  CHECK(f.u()[s] == doctest::Approx(1.0));
  CHECK(f.u()[2 * s] == doctest::Approx(0.0));

  const auto z = generate_beltrami(g, 0, 0, 0);
  for (double v : z.u()) CHECK(v == 0.0);
  for (double v : z.p()) CHECK(v == 0.0);

  const auto b = generate_beltrami(g, 1, 1, 1);
  for (int n = 0; n < g.nt; ++n) {
    auto p = b.p_slice(n);
    double mean = 0.0, mean_half = 0.0;
    for (std::size_t q = 0; q < s; ++q) {
      double u2 = 0.0;
      for (int c = 0; c < 3; ++c) u2 += b.u_slice(n, c)[q] * b.u_slice(n, c)[q];
      mean += p[q];
      mean_half += -0.5 * u2;
    }
    CHECK(std::abs(mean) < 1e-12);
    mean_half /= s;
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        for (int k = 0; k < g.nz; ++k) {
          const double u2 = oracle::beltrami_u2(i * g.hx(), j * g.hy(), k * g.hz(), g.time(n));
          CHECK(p[g.index(i, j, k)] == doctest::Approx(-0.5 * u2 - mean_half).epsilon(1e-12));
        }
  }
  CHECK(max_relative_divergence(b) <= 1e-10);
}

TEST_CASE("beltrami requires a 2pi box") {
  CHECK(code_of([] { generate_beltrami(box_grid(8, 3, 0.1, 3.0), 1, 1, 1); }) ==
        ErrorCode::Configuration);
}

TEST_CASE("beltrami momentum residual converges under refinement") {
  auto residual = [](int n, double dt) {
    const Grid g = box_grid(n, 3, dt);
    const auto f = generate_beltrami(g, 1, 1, 1);
    SpectralOps ops(g.nx, g.ny, g.nz, g.lx, g.ly, g.lz);
    const auto u = f.u_slice(1);
    const auto grad = ops.gradient_tensor(u);
    const std::size_t s = g.spatial_size();
    std::vector<double> p(f.p_slice(1).begin(), f.p_slice(1).end());
    double worst = 0.0;
    for (int c = 0; c < 3; ++c) {
      const auto lap = ops.laplacian(f.u_slice(1, c));
      const auto dp = ops.derivative(p, c);
      for (std::size_t q = 0; q < s; ++q) {
        const double dudt = (f.u_slice(2, c)[q] - f.u_slice(0, c)[q]) / (2.0 * dt);
        double adv = 0.0;
        for (int a = 0; a < 3; ++a) adv += u[a * s + q] * grad[3 * c + a][q];
        worst = std::max(worst, std::abs(dudt - lap[q] + adv + dp[q]));
      }
    }
    return worst / f.max_abs_u();
  };
  const double r1 = residual(8, 0.1), r2 = residual(16, 0.05);
  const double h1 = 2.0 * oracle::kPi / 8;
  CHECK(r1 <= 1.0 * (h1 * h1 + 0.01));
  CHECK(r1 / r2 >= 3.0);
}

TEST_CASE("constant generator") {
  const Grid g = box_grid(8);
  const auto f = generate_constant(g, {1, 0, 0}, 0.0);
  const std::size_t s = g.spatial_size();
  for (int n = 0; n < g.nt; ++n)
    for (std::size_t q = 0; q < s; ++q) {
      CHECK(f.u_slice(n, 0)[q] == 1.0);
      CHECK(f.u_slice(n, 1)[q] == 0.0);
      CHECK(f.u_slice(n, 2)[q] == 0.0);
    }
  const auto z = generate_constant(g, {0, 0, 0}, 0.0);
  CHECK(z.max_abs_u() == 0.0);
  const auto c = generate_constant(g, {1, 2, 3}, 0.0);
  CHECK(max_relative_divergence(c) == 0.0);
}

TEST_CASE("near-singular profile") {
  Grid g = box_grid(8, 5, 0.25, 4.0);  // h = 0.5
  const SpacetimePoint center{{2.0, 2.0, 2.0}, 0.5};
  const auto f = generate_near_singular(g, 1.0, center, 100.0);
  const std::size_t s = g.spatial_size();
  auto mag = [&](int n, int i, int j, int k) {
    double m = 0.0;
    for (int c = 0; c < 3; ++c) m += std::pow(f.u_slice(n, c)[g.index(i, j, k)], 2);
    return std::sqrt(m);
  };
  CHECK(mag(2, 5, 4, 4) == doctest::Approx(2.0));  // spatial distance 0.5
  CHECK(mag(1, 4, 4, 4) == doctest::Approx(2.0));  // time distance 0.25
  CHECK(mag(2, 4, 4, 4) == doctest::Approx(100.0));
  for (int n = 0; n < g.nt; ++n)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        for (int k = 0; k < g.nz; ++k) {
          const double d = parabolic_distance(g, {i * 0.5, j * 0.5, k * 0.5}, g.time(n), center);
          if (d >= 1.0) CHECK(mag(n, i, j, k) <= 1.0 + 1e-12);
        }
  for (double v : f.p()) CHECK(v == 0.0);
  CHECK(f.metadata().at("exact_solution") == "false");
  (void)s;

  CHECK(code_of([&] { generate_near_singular(g, 0.0, center); }) == ErrorCode::Configuration);
  CHECK(code_of([&] { generate_near_singular(g, 2.0, center); }) == ErrorCode::Configuration);
  CHECK(code_of([&] { generate_near_singular(g, 1.0, center, -1.0); }) ==
        ErrorCode::Configuration);
}

TEST_CASE("near-singular C(r) follows power counting") {
  // |U| ~ d^{-e} gives C(r) = r^{-2} int_Q |U|^3 ~ r^{3 - 3e} for e < 5/3.
  // The oracle integrates the profile directly; the slope of the engine's
  // values must match it.
  const double e = 0.5;
  Grid g = box_grid(64, 65, 1.0 / 256.0, 2.0);
  const SpacetimePoint center{{1.0, 1.0, 1.0}, 0.25};
  const auto f = generate_near_singular(g, e, center);
  FunctionalEngine eng(f);
  std::vector<double> rs{0.4, 0.2}, c_eng, c_ora;
  for (double r : rs) {
    const SpacetimePoint z{center.x, center.t};
    c_eng.push_back(eng.C(z, r));
    const double tt = center.t;
    auto prof = [&](double x, double y, double zz, double s) {
      const double sp = std::sqrt((x - 1) * (x - 1) + (y - 1) * (y - 1) + (zz - 1) * (zz - 1));
      const double d = std::max(sp, std::sqrt(std::abs(s - tt)));
      return std::pow(d, -3.0 * e);
    };
    c_ora.push_back(oracle::cylinder_integral(prof, {1, 1, 1}, r, tt - r * r, tt, 24, 16, 16, 24) /
                    (r * r));
  }
  const double slope_eng = std::log(c_eng[0] / c_eng[1]) / std::log(2.0);
  const double slope_ora = std::log(c_ora[0] / c_ora[1]) / std::log(2.0);
  CHECK(slope_ora == doctest::Approx(3.0 - 3.0 * e).epsilon(0.02));
  CHECK(slope_eng == doctest::Approx(slope_ora).epsilon(0.1));
}

TEST_CASE("rescale") {
  const Grid g = box_grid(8, 5, 0.1);
  const auto f = generate_beltrami(g, 1, 1, 1);
  const auto same = rescale(f, 1.0);
  REQUIRE(same.u().size() == f.u().size());
  CHECK(std::memcmp(same.u().data(), f.u().data(), f.u().size_bytes()) == 0);
  CHECK(std::memcmp(same.p().data(), f.p().data(), f.p().size_bytes()) == 0);

  const auto c = generate_constant(g, {1, 2, 2}, 0.5);
  for (double lambda : {0.5, 2.0, 3.0}) {
    const auto r = rescale(c, lambda);
    CHECK(r.grid().lx == doctest::Approx(g.lx / lambda));
    CHECK(r.grid().dt == doctest::Approx(g.dt / (lambda * lambda)));
    CHECK(r.max_abs_u() == doctest::Approx(3.0 * lambda));
    CHECK(r.metadata().at("rescale_lambda") == (lambda == 0.5 ? "0.5" : lambda == 2.0 ? "2" : "3"));
  }
  CHECK(code_of([&] { rescale(f, 0.0); }) == ErrorCode::InvalidArgument);
  RescaleOptions opts;
  opts.t0 = 0.0;
  opts.nt = 5;
  opts.dt = 1.0;
  CHECK(code_of([&] { rescale(f, 2.0, opts); }) == ErrorCode::Domain);

  // Trigonometric resampling is exact for band-limited data.
  RescaleOptions fine;
  fine.resolution = std::array<int, 3>{16, 16, 16};
  const auto r = rescale(f, 1.0, fine);
  const Grid& rg = r.grid();
  for (int i = 0; i < 16; i += 3)
    for (int j = 0; j < 16; j += 5)
      for (int k = 0; k < 16; k += 7) {
        const auto u = oracle::beltrami_u(i * rg.hx(), j * rg.hy(), k * rg.hz(), rg.time(2));
        CHECK(r.u_slice(2, 1)[rg.index(i, j, k)] == doctest::Approx(u[1]).epsilon(1e-12));
      }
}

TEST_CASE("crc64 matches bitwise oracle") {
  const char* check = "123456789";
  const auto* p = reinterpret_cast<const unsigned char*>(check);
  CHECK(oracle::crc64_xz(p, 9) == 0x995DC9BBDF1939FAull);
  CHECK(crc64({p, 9}) == 0x995DC9BBDF1939FAull);
  std::mt19937_64 rng(7);
  std::vector<unsigned char> buf(4099);
  for (auto& b : buf) b = static_cast<unsigned char>(rng());
  for (std::size_t n : {0ul, 1ul, 7ul, 8ul, 63ul, 4099ul})
    CHECK(crc64({buf.data(), n}) == oracle::crc64_xz(buf.data(), n));
  CHECK(crc64_hex(0x995DC9BBDF1939FAull).size() == 16);
}

TEST_CASE("nsst round trip is bitwise") {
  const auto dir = oracle::temp_dir("nsst");
  const Grid g = box_grid(6, 3, 0.1);
  for (bool mhd : {false, true}) {
    const auto f = mhd ? generate_beltrami_mhd(g, 1, 0.5, 0.25, 0.3) : generate_beltrami(g, 1, 2, 3);
    store(f, dir / "f");
    const auto l = load(dir / "f");
    CHECK(l.grid() == f.grid());
    CHECK(l.has_b() == f.has_b());
    CHECK(std::memcmp(l.u().data(), f.u().data(), f.u().size_bytes()) == 0);
    CHECK(std::memcmp(l.p().data(), f.p().data(), f.p().size_bytes()) == 0);
    if (mhd) CHECK(std::memcmp(l.b().data(), f.b().data(), f.b().size_bytes()) == 0);
    CHECK(l.metadata() == f.metadata());
  }
  fs::remove_all(dir);
}

TEST_CASE("nsst failure modes are distinct") {
  const auto dir = oracle::temp_dir("nsst_bad");
  const Grid g = box_grid(4, 2, 0.1);
  const auto f = generate_beltrami(g, 1, 1, 1);
  auto fresh = [&](const std::string& name) {
    store(f, dir / name);
    return dir / name;
  };
  auto edit_header = [](const fs::path& d, const std::function<void(nlohmann::json&)>& edit) {
    nlohmann::json h;
    {
      std::ifstream in(d / "header.json");
      in >> h;
    }
    edit(h);
    std::ofstream(d / "header.json") << h.dump();
  };

  {
    auto d = fresh("trunc");
    fs::resize_file(d / "u.bin", fs::file_size(d / "u.bin") / 2);
    CHECK(code_of([&] { load(d); }) == ErrorCode::TruncatedPayload);
  }
  {
    auto d = fresh("missing");
    fs::remove(d / "p.bin");
    CHECK(code_of([&] { load(d); }) == ErrorCode::TruncatedPayload);
  }
  {
    auto d = fresh("long");
    std::ofstream(d / "u.bin", std::ios::app | std::ios::binary) << "extra!!!";
    CHECK(code_of([&] { load(d); }) == ErrorCode::MalformedHeader);
  }
  {
    auto d = fresh("corrupt");
    std::fstream io(d / "u.bin", std::ios::in | std::ios::out | std::ios::binary);
    io.seekp(17);
    io.put('\x5a');
    io.close();
    CHECK(code_of([&] { load(d); }) == ErrorCode::ChecksumMismatch);
  }
  {
    auto d = fresh("nx0");
    edit_header(d, [](nlohmann::json& h) { h["nx"] = 0; });
    CHECK(code_of([&] { load(d); }) == ErrorCode::MalformedHeader);
  }
  {
    auto d = fresh("unknown");
    edit_header(d, [](nlohmann::json& h) { h["surprise"] = 1; });
    CHECK(code_of([&] { load(d); }) == ErrorCode::MalformedHeader);
  }
  {
    auto d = fresh("version");
    edit_header(d, [](nlohmann::json& h) { h["version"] = 2; });
    CHECK(code_of([&] { load(d); }) == ErrorCode::MalformedHeader);
  }
  {
    auto d = fresh("garbage");
    std::ofstream(d / "header.json") << "{not json";
    CHECK(code_of([&] { load(d); }) == ErrorCode::MalformedHeader);
  }
  CHECK(code_of([&] { load(dir / "absent"); }) == ErrorCode::Io);
  fs::remove_all(dir);
}

TEST_CASE("field rejects non-finite samples and size mismatches") {
  const Grid g = box_grid(4, 2, 0.1);
  const std::size_t s = g.spatial_size();
  std::vector<double> u(3 * s * 2, 0.0), p(s * 2, 0.0);
  u[5] = std::nan("");
  CHECK(code_of([&] { SpaceTimeField(g, u, p); }) == ErrorCode::InvalidArgument);
  u.pop_back();
  CHECK(code_of([&] { SpaceTimeField(g, u, p); }) == ErrorCode::InvalidArgument);
  const auto f = generate_constant(g, {1, 0, 0}, 0);
  CHECK(code_of([&] { (void)f.b(); }) == ErrorCode::Configuration);
}
