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

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>

#include "parreg/error.hpp"
#include "parreg/functionals.hpp"
#include "parreg/spectral.hpp"

namespace parreg {

struct FunctionalEngine::Cache {
  std::array<std::once_flag, kDensityCount> once;
  std::array<std::vector<double>, kDensityCount> data;
  std::once_flag ops_once;
  std::unique_ptr<SpectralOps> ops;
};

namespace {

bool is_magnetic(Density d) {
  return d == Density::B2 || d == Density::GradB2 || d == Density::B3 || d == Density::B103;
}

std::vector<double> squared_norm(std::span<const double> v, std::size_t nt, std::size_t s) {
  std::vector<double> out(nt * s);
  for (std::size_t n = 0; n < nt; ++n) {
    const double* base = v.data() + n * 3 * s;
    for (std::size_t q = 0; q < s; ++q)
      out[n * s + q] = base[q] * base[q] + base[s + q] * base[s + q] + base[2 * s + q] * base[2 * s + q];
  }
  return out;
}

std::vector<double> power_of(std::span<const double> base, double exponent) {
  std::vector<double> out(base.size());
  for (std::size_t q = 0; q < base.size(); ++q) out[q] = std::pow(std::abs(base[q]), exponent);
  return out;
}

void check_point(const SpacetimePoint& z, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCode::InvalidArgument, "radius must be positive");
  for (double c : z.x)
    if (!std::isfinite(c)) fail(ErrorCode::InvalidArgument, "non-finite center");
  if (!std::isfinite(z.t)) fail(ErrorCode::InvalidArgument, "non-finite time");
}

}  // namespace

const char* to_string(TimeWindowMode mode) {
  return mode == TimeWindowMode::PaperLiteral ? "paper_literal" : "cylinder";
}

TimeWindowMode parse_time_window_mode(const std::string& name) {
  if (name == "paper_literal") return TimeWindowMode::PaperLiteral;
  if (name == "cylinder") return TimeWindowMode::Cylinder;
  fail(ErrorCode::Configuration, "unknown time window mode '" + name + "'");
}

FunctionalEngine::FunctionalEngine(const SpaceTimeField& field)
    : field_(field), cache_(std::make_unique<Cache>()) {}

FunctionalEngine::~FunctionalEngine() = default;

std::span<const double> FunctionalEngine::density(Density d) const {
  if (is_magnetic(d) && !field_.has_b())
    fail(ErrorCode::Configuration, "field carries no magnetic component");
  const int slot = static_cast<int>(d);
  std::call_once(cache_->once[slot], [&] {
    const Grid& g = field_.grid();
    const std::size_t s = g.spatial_size();
    const std::size_t nt = static_cast<std::size_t>(g.nt);
    auto gradient = [&](bool magnetic) {
      std::call_once(cache_->ops_once, [&] {
        cache_->ops = std::make_unique<SpectralOps>(g.nx, g.ny, g.nz, g.lx, g.ly, g.lz);
      });
      std::vector<double> out(nt * s);
      for (int n = 0; n < g.nt; ++n) {
        auto slice = magnetic ? field_.b_slice(n) : field_.u_slice(n);
        auto gn = cache_->ops->gradient_norm_sq(slice);
        std::copy(gn.begin(), gn.end(), out.begin() + n * s);
      }
      return out;
    };
    std::vector<double> v;
    switch (d) {
      case Density::U2: v = squared_norm(field_.u(), nt, s); break;
      case Density::B2: v = squared_norm(field_.b(), nt, s); break;
      case Density::GradU2: v = gradient(false); break;
      case Density::GradB2: v = gradient(true); break;
      case Density::U3: v = power_of(density(Density::U2), 1.5); break;
      case Density::B3: v = power_of(density(Density::B2), 1.5); break;
      case Density::U103: v = power_of(density(Density::U2), 5.0 / 3.0); break;
      case Density::B103: v = power_of(density(Density::B2), 5.0 / 3.0); break;
      case Density::P32: v = power_of(field_.p(), 1.5); break;
      case Density::P53: v = power_of(field_.p(), 5.0 / 3.0); break;
    }
    cache_->data[slot] = std::move(v);
  });
  return cache_->data[slot];
}

namespace {

// Ball integral of the density sum at sample n. Terms are accumulated one at a
// time so that an all-zero term leaves the sum bit-identical.
double ball_sum(const std::vector<std::span<const double>>& dens,
                const std::vector<BallWeight>& stencil, std::size_t s, int n) {
  double total = 0.0;
  for (const auto& d : dens) {
    const double* base = d.data() + static_cast<std::size_t>(n) * s;
    double acc = 0.0;
    for (const auto& bw : stencil) acc += bw.weight * base[bw.index];
    total += acc;
  }
  return total;
}

std::vector<std::span<const double>> gather(const FunctionalEngine& eng,
                                            std::initializer_list<Density> terms) {
  std::vector<std::span<const double>> out;
  for (Density d : terms) out.push_back(eng.density(d));
  return out;
}

}  // namespace

Integral FunctionalEngine::cylinder_integral(std::initializer_list<Density> terms,
                                             const SpacetimePoint& z, double r,
                                             BallRule rule) const {
  check_point(z, r);
  const Grid& g = field_.grid();
  const auto stencil = ball_stencil(g, z.x, r, rule);
  const double lo = std::max(z.t - r * r, g.t0);
  const double hi = std::min(z.t, g.t_end());
  if (!(hi > lo)) fail(ErrorCode::Domain, "cylinder time window does not meet the data range");
  const auto tw = time_weights(g, lo, hi);
  const auto dens = gather(*this, terms);
  const std::size_t s = g.spatial_size();

  // Samples touching the window plus one neighbor each side for the
  // curvature estimate.
  const int n_first = std::max(0, tw.front().n - 1);
  const int n_last = std::min(g.nt - 1, tw.back().n + 1);
  std::vector<double> vals(n_last - n_first + 1);
  for (int n = n_first; n <= n_last; ++n) vals[n - n_first] = ball_sum(dens, stencil, s, n);

  Integral out;
  for (const auto& w : tw) out.value += w.weight * vals[w.n - n_first];
  double curv = 0.0;
  for (std::size_t q = 1; q + 1 < vals.size(); ++q)
    curv = std::max(curv, std::abs(vals[q + 1] - 2.0 * vals[q] + vals[q - 1]));
  const double ratio = g.h_max() / r;
  out.error = kBallQuadratureKappa * ratio * ratio * std::abs(out.value) +
              (hi - lo) * curv / 12.0;
  return out;
}

Integral FunctionalEngine::ball_sup(std::initializer_list<Density> terms, const SpacetimePoint& z,
                                    double r, TimeWindowMode mode) const {
  check_point(z, r);
  const Grid& g = field_.grid();
  const auto stencil = ball_stencil(g, z.x, r);
  const double w_hi = mode == TimeWindowMode::PaperLiteral ? z.t + r * r : z.t;
  const double lo = std::max(z.t - r * r, g.t0);
  const double hi = std::min(w_hi, g.t_end());
  const bool empty = mode == TimeWindowMode::PaperLiteral ? !(hi > lo) : !(hi >= lo);
  if (empty) fail(ErrorCode::Domain, "A time window does not meet the data range");
  const auto dens = gather(*this, terms);
  const std::size_t s = g.spatial_size();

  const double tol = 1e-9 * g.dt;
  auto at_time = [&](double t) {
    double pos = (t - g.t0) / g.dt;
    int n = static_cast<int>(std::floor(pos));
    n = std::clamp(n, 0, g.nt - 2);
    const double lam = std::clamp(pos - n, 0.0, 1.0);
    const double g0 = ball_sum(dens, stencil, s, n);
    if (lam == 0.0) return g0;
    const double g1 = ball_sum(dens, stencil, s, n + 1);
    if (lam == 1.0) return g1;
    return (1.0 - lam) * g0 + lam * g1;
  };

  std::vector<double> seq;
  seq.push_back(at_time(lo));
  for (int n = 0; n < g.nt; ++n) {
    const double t = g.time(n);
    if (t > lo + tol && t < hi - tol) seq.push_back(ball_sum(dens, stencil, s, n));
  }
  if (hi > lo) seq.push_back(at_time(hi));

  Integral out;
  double jump = 0.0;
  for (std::size_t q = 0; q < seq.size(); ++q) {
    out.value = std::max(out.value, seq[q]);
    if (q > 0) jump = std::max(jump, std::abs(seq[q] - seq[q - 1]));
  }
  const double ratio = g.h_max() / r;
  out.error = kBallQuadratureKappa * ratio * ratio * std::abs(out.value) + 0.5 * jump;
  return out;
}

double FunctionalEngine::domain_integral(std::initializer_list<Density> terms) const {
  const Grid& g = field_.grid();
  const auto dens = gather(*this, terms);
  const std::size_t s = g.spatial_size();
  const auto tw = time_weights(g, g.t0, g.t_end());
  double total = 0.0;
  for (const auto& d : dens) {
    double acc = 0.0;
    for (const auto& w : tw) {
      const double* base = d.data() + static_cast<std::size_t>(w.n) * s;
      double slice = 0.0;
      for (std::size_t q = 0; q < s; ++q) slice += base[q];
      acc += w.weight * slice;
    }
    total += acc;
  }
  return total * g.cell_volume();
}

double FunctionalEngine::A(const SpacetimePoint& z, double r, TimeWindowMode mode) const {
  return ball_sup({Density::U2}, z, r, mode).value / r;
}

double FunctionalEngine::E(const SpacetimePoint& z, double r) const {
  return cylinder_integral({Density::GradU2}, z, r).value / r;
}

double FunctionalEngine::C(const SpacetimePoint& z, double r) const {
  return cylinder_integral({Density::U3}, z, r).value / (r * r);
}

double FunctionalEngine::D(const SpacetimePoint& z, double r) const {
  return cylinder_integral({Density::P32}, z, r).value / (r * r);
}

namespace {

FunctionalValues assemble(const SpacetimePoint& z, double r, const Integral& a, const Integral& e,
                          const Integral& c, const Integral& d) {
  FunctionalValues v;
  v.z = z;
  v.r = r;
  v.a = a.value / r;
  v.err_a = a.error / r;
  v.e = e.value / r;
  v.err_e = e.error / r;
  v.c = c.value / (r * r);
  v.err_c = c.error / (r * r);
  v.d = d.value / (r * r);
  v.err_d = d.error / (r * r);
  v.estimated_quadrature_error = std::max({v.err_a, v.err_e, v.err_c, v.err_d});
  return v;
}

}  // namespace

FunctionalValues FunctionalEngine::evaluate(const SpacetimePoint& z, double r,
                                            TimeWindowMode mode) const {
  return assemble(z, r, ball_sup({Density::U2}, z, r, mode),
                  cylinder_integral({Density::GradU2}, z, r),
                  cylinder_integral({Density::U3}, z, r),
                  cylinder_integral({Density::P32}, z, r));
}

FunctionalValues FunctionalEngine::evaluate_mhd(const SpacetimePoint& z, double r,
                                                TimeWindowMode mode) const {
  if (!field_.has_b()) fail(ErrorCode::Configuration, "magnetic functionals need a B field");
  return assemble(z, r, ball_sup({Density::U2, Density::B2}, z, r, mode),
                  cylinder_integral({Density::GradU2, Density::GradB2}, z, r),
                  cylinder_integral({Density::U3, Density::B3}, z, r),
                  cylinder_integral({Density::P32}, z, r));
}

Integral FunctionalEngine::theorem1_lhs(const SpacetimePoint& z, double rho) const {
  if (field_.has_b())
    return cylinder_integral(
        {Density::GradU2, Density::U103, Density::P53, Density::GradB2, Density::B103}, z, rho);
  return cylinder_integral({Density::GradU2, Density::U103, Density::P53}, z, rho);
}

double FunctionalEngine::theorem1_domain_integral() const {
  if (field_.has_b())
    return domain_integral(
        {Density::GradU2, Density::U103, Density::P53, Density::GradB2, Density::B103});
  return domain_integral({Density::GradU2, Density::U103, Density::P53});
}

double eval_A(const SpaceTimeField& f, const SpacetimePoint& z, double r, TimeWindowMode mode) {
  return FunctionalEngine(f).A(z, r, mode);
}
double eval_E(const SpaceTimeField& f, const SpacetimePoint& z, double r) {
  return FunctionalEngine(f).E(z, r);
}
double eval_C(const SpaceTimeField& f, const SpacetimePoint& z, double r) {
  return FunctionalEngine(f).C(z, r);
}
double eval_D(const SpaceTimeField& f, const SpacetimePoint& z, double r) {
  return FunctionalEngine(f).D(z, r);
}
double eval_theorem1_lhs(const SpaceTimeField& f, const SpacetimePoint& z, double rho) {
  return FunctionalEngine(f).theorem1_lhs(z, rho).value;
}

}  // namespace parreg
