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

#include "parreg/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "parreg/error.hpp"
#include "parreg/spectral.hpp"

namespace parreg {

double Grid::h_max() const { return std::max({hx(), hy(), hz()}); }

double Grid::min_side() const { return std::min({lx, ly, lz}); }

void Grid::validate() const {
  std::ostringstream why;
  if (nx < 4 || ny < 4 || nz < 4) {
    why << "grid counts must be >= 4 (got " << nx << "x" << ny << "x" << nz << ")";
  } else if (nt < 2) {
    why << "grid needs at least 2 time samples (got nt=" << nt << ")";
  } else if (!(lx > 0.0 && ly > 0.0 && lz > 0.0) || !std::isfinite(lx * ly * lz)) {
    why << "box lengths must be positive and finite";
  } else if (!(dt > 0.0) || !std::isfinite(dt)) {
    why << "dt must be positive and finite";
  } else if (!std::isfinite(t0)) {
    why << "t0 must be finite";
  }
  if (!why.str().empty()) fail(ErrorCode::Configuration, why.str());
}

bool operator==(const Grid& a, const Grid& b) {
  return a.nx == b.nx && a.ny == b.ny && a.nz == b.nz && a.lx == b.lx &&
         a.ly == b.ly && a.lz == b.lz && a.nt == b.nt && a.t0 == b.t0 &&
         a.dt == b.dt;
}

SpaceTimeField::SpaceTimeField(Grid grid, std::vector<double> u,
                               std::vector<double> p,
                               std::optional<std::vector<double>> b,
                               Metadata metadata)
    : grid_(grid),
      u_(std::move(u)),
      p_(std::move(p)),
      b_(std::move(b)),
      metadata_(std::move(metadata)) {
  grid_.validate();
  const std::size_t n = grid_.spatial_size() * grid_.nt;
  if (u_.size() != 3 * n || p_.size() != n || (b_ && b_->size() != 3 * n))
    fail(ErrorCode::InvalidArgument, "field array sizes do not match the grid");
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(u_) || !finite(p_) || (b_ && !finite(*b_)))
    fail(ErrorCode::InvalidArgument, "field contains non-finite samples");
}

std::span<const double> SpaceTimeField::b() const {
  if (!b_) fail(ErrorCode::Configuration, "field has no magnetic component");
  return *b_;
}

std::span<const double> SpaceTimeField::u_slice(int n, int c) const {
  const std::size_t s = grid_.spatial_size();
  return std::span<const double>(u_).subspan((static_cast<std::size_t>(n) * 3 + c) * s, s);
}

std::span<const double> SpaceTimeField::u_slice(int n) const {
  const std::size_t s = grid_.spatial_size();
  return std::span<const double>(u_).subspan(static_cast<std::size_t>(n) * 3 * s, 3 * s);
}

std::span<const double> SpaceTimeField::p_slice(int n) const {
  const std::size_t s = grid_.spatial_size();
  return std::span<const double>(p_).subspan(static_cast<std::size_t>(n) * s, s);
}

std::span<const double> SpaceTimeField::b_slice(int n, int c) const {
  const std::size_t s = grid_.spatial_size();
  return b().subspan((static_cast<std::size_t>(n) * 3 + c) * s, s);
}

std::span<const double> SpaceTimeField::b_slice(int n) const {
  const std::size_t s = grid_.spatial_size();
  return b().subspan(static_cast<std::size_t>(n) * 3 * s, 3 * s);
}

double SpaceTimeField::max_abs_u() const {
  const std::size_t s = grid_.spatial_size();
  double m = 0.0;
  for (int n = 0; n < grid_.nt; ++n) {
    auto u = u_slice(n);
    for (std::size_t q = 0; q < s; ++q) {
      const double v2 = u[q] * u[q] + u[s + q] * u[s + q] + u[2 * s + q] * u[2 * s + q];
      m = std::max(m, v2);
    }
  }
  return std::sqrt(m);
}

double periodic_delta(double a, double b, double l) {
  double d = std::fmod(a - b, l);
  if (d > 0.5 * l) d -= l;
  if (d < -0.5 * l) d += l;
  return d;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_two_pi_box(const Grid& grid) {
  auto near = [](double v) { return std::abs(v - kTwoPi) <= 1e-12 * kTwoPi; };
  if (!near(grid.lx) || !near(grid.ly) || !near(grid.lz))
    fail(ErrorCode::Configuration, "Beltrami generator requires a (2*pi)^3 box");
}

// Writes e^{-(t-t0)}-scaled ABC velocity into u (3*s) for sample n.
void fill_abc(const Grid& g, double a, double b, double c, double decay,
              std::span<double> u) {
  const std::size_t s = g.spatial_size();
  for (int i = 0; i < g.nx; ++i) {
    const double x = i * g.hx();
    for (int j = 0; j < g.ny; ++j) {
      const double y = j * g.hy();
      for (int k = 0; k < g.nz; ++k) {
        const double z = k * g.hz();
        const std::size_t q = g.index(i, j, k);
        u[q] = decay * (a * std::sin(z) + c * std::cos(y));
        u[s + q] = decay * (b * std::sin(x) + a * std::cos(z));
        u[2 * s + q] = decay * (c * std::sin(y) + b * std::cos(x));
      }
    }
  }
}

// p = -coef |u|^2 / 2 with the spatial mean removed.
void fill_bernoulli_pressure(std::size_t s, std::span<const double> u, double coef,
                             std::span<double> p) {
  double mean = 0.0;
  for (std::size_t q = 0; q < s; ++q) {
    const double u2 = u[q] * u[q] + u[s + q] * u[s + q] + u[2 * s + q] * u[2 * s + q];
    p[q] = -0.5 * coef * u2;
    mean += p[q];
  }
  mean /= static_cast<double>(s);
  for (std::size_t q = 0; q < s; ++q) p[q] -= mean;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

SpaceTimeField generate_beltrami(const Grid& grid, double a, double b, double c) {
  grid.validate();
  require_two_pi_box(grid);
  const std::size_t s = grid.spatial_size();
  std::vector<double> u(3 * s * grid.nt), p(s * grid.nt);
  for (int n = 0; n < grid.nt; ++n) {
    const double decay = std::exp(-(grid.time(n) - grid.t0));
    std::span<double> un(u.data() + 3 * s * n, 3 * s);
    fill_abc(grid, a, b, c, decay, un);
    fill_bernoulli_pressure(s, un, 1.0, std::span<double>(p.data() + s * n, s));
  }
  Metadata meta{{"generator", "beltrami"},
                {"a", fmt_double(a)},
                {"b", fmt_double(b)},
                {"c", fmt_double(c)},
                {"exact_solution", "true"}};
  return SpaceTimeField(grid, std::move(u), std::move(p), std::nullopt, std::move(meta));
}

SpaceTimeField generate_beltrami_mhd(const Grid& grid, double a, double b, double c,
                                     double b_scale) {
  grid.validate();
  require_two_pi_box(grid);
  const std::size_t s = grid.spatial_size();
  std::vector<double> u(3 * s * grid.nt), p(s * grid.nt), mag(3 * s * grid.nt);
  for (int n = 0; n < grid.nt; ++n) {
    const double decay = std::exp(-(grid.time(n) - grid.t0));
    std::span<double> un(u.data() + 3 * s * n, 3 * s);
    fill_abc(grid, a, b, c, decay, un);
    for (std::size_t q = 0; q < 3 * s; ++q) mag[3 * s * n + q] = b_scale * un[q];
    fill_bernoulli_pressure(s, un, 1.0 - b_scale * b_scale,
                            std::span<double>(p.data() + s * n, s));
  }
  Metadata meta{{"generator", "beltrami_mhd"},
                {"a", fmt_double(a)},
                {"b", fmt_double(b)},
                {"c", fmt_double(c)},
                {"b_scale", fmt_double(b_scale)},
                {"exact_solution", "true"}};
  return SpaceTimeField(grid, std::move(u), std::move(p), std::move(mag), std::move(meta));
}

SpaceTimeField generate_constant(const Grid& grid, const Vec3& u0, double p0) {
  grid.validate();
  const std::size_t s = grid.spatial_size();
  std::vector<double> u(3 * s * grid.nt), p(s * grid.nt, p0);
  for (int n = 0; n < grid.nt; ++n)
    for (int c = 0; c < 3; ++c)
      std::fill_n(u.begin() + (3 * n + c) * s, s, u0[c]);
  Metadata meta{{"generator", "constant"},
                {"u0", fmt_double(u0[0]) + "," + fmt_double(u0[1]) + "," + fmt_double(u0[2])},
                {"p0", fmt_double(p0)}};
  return SpaceTimeField(grid, std::move(u), std::move(p), std::nullopt, std::move(meta));
}

double parabolic_distance(const Grid& grid, const Vec3& y, double s,
                          const SpacetimePoint& center) {
  const double dx = periodic_delta(y[0], center.x[0], grid.lx);
  const double dy = periodic_delta(y[1], center.x[1], grid.ly);
  const double dz = periodic_delta(y[2], center.x[2], grid.lz);
  const double spatial = std::sqrt(dx * dx + dy * dy + dz * dz);
  return std::max(spatial, std::sqrt(std::abs(s - center.t)));
}

SpaceTimeField generate_near_singular(const Grid& grid, double exponent,
                                      const SpacetimePoint& center,
                                      std::optional<double> cap) {
  grid.validate();
  if (!(exponent > 0.0 && exponent < 2.0))
    fail(ErrorCode::Configuration, "near-singular exponent must lie in (0, 2)");
  const double h_min = std::min({grid.hx(), grid.hy(), grid.hz()});
  const double cap_value = cap.value_or(std::pow(0.5 * h_min, -exponent));
  if (!(cap_value > 0.0) || !std::isfinite(cap_value))
    fail(ErrorCode::Configuration, "near-singular cap must be positive and finite");

  const std::size_t s = grid.spatial_size();
  std::vector<double> u(3 * s * grid.nt), p(s * grid.nt, 0.0);
  const double dir = 1.0 / std::sqrt(3.0);
  for (int n = 0; n < grid.nt; ++n) {
    const double t = grid.time(n);
    for (int i = 0; i < grid.nx; ++i)
      for (int j = 0; j < grid.ny; ++j)
        for (int k = 0; k < grid.nz; ++k) {
          const Vec3 y{i * grid.hx(), j * grid.hy(), k * grid.hz()};
          const double dist = parabolic_distance(grid, y, t, center);
          const double mag = dist > 0.0 ? std::min(cap_value, std::pow(dist, -exponent))
                                        : cap_value;
          const std::size_t q = grid.index(i, j, k);
          for (int c = 0; c < 3; ++c) u[(3 * n + c) * s + q] = mag * dir;
        }
  }
  Metadata meta{{"generator", "near_singular"},
                {"exponent", fmt_double(exponent)},
                {"cap", fmt_double(cap_value)},
                {"center", fmt_double(center.x[0]) + "," + fmt_double(center.x[1]) + "," +
                               fmt_double(center.x[2]) + "," + fmt_double(center.t)},
                {"exact_solution", "false"},
                {"note", "synthetic blow-up profile, not a Navier-Stokes solution"}};
  return SpaceTimeField(grid, std::move(u), std::move(p), std::nullopt, std::move(meta));
}

SpaceTimeField rescale(const SpaceTimeField& field, double lambda,
                       const RescaleOptions& options) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    fail(ErrorCode::InvalidArgument, "rescale factor must be positive and finite");
  const Grid& in = field.grid();
  Grid out = in;
  out.lx = in.lx / lambda;
  out.ly = in.ly / lambda;
  out.lz = in.lz / lambda;
  if (options.resolution) {
    out.nx = (*options.resolution)[0];
    out.ny = (*options.resolution)[1];
    out.nz = (*options.resolution)[2];
  }
  const double l2 = lambda * lambda;
  out.t0 = options.t0.value_or(in.t0 / l2);
  out.nt = options.nt.value_or(in.nt);
  out.dt = options.dt.value_or(in.dt / l2);
  out.validate();

  // Source sample for each output time: nearest input sample of l^2 t.
  std::vector<int> source(out.nt);
  for (int n = 0; n < out.nt; ++n) {
    const double t_src = l2 * out.time(n);
    const double idx = (t_src - in.t0) / in.dt;
    const long nearest = std::lround(idx);
    if (idx < -0.5 - 1e-9 || idx > (in.nt - 1) + 0.5 + 1e-9)
      fail(ErrorCode::Domain, "rescaled time axis leaves the data's time range");
    source[n] = static_cast<int>(std::clamp<long>(nearest, 0, in.nt - 1));
  }

  const bool same_res = out.nx == in.nx && out.ny == in.ny && out.nz == in.nz;
  const std::size_t s_in = in.spatial_size();
  const std::size_t s_out = out.spatial_size();
  auto resample = [&](std::span<const double> slice, double factor, double* dst) {
    if (same_res) {
      for (std::size_t q = 0; q < s_in; ++q) dst[q] = factor * slice[q];
      return;
    }
    auto r = resample_periodic(slice, in.nx, in.ny, in.nz, out.nx, out.ny, out.nz);
    for (std::size_t q = 0; q < s_out; ++q) dst[q] = factor * r[q];
  };

  std::vector<double> u(3 * s_out * out.nt), p(s_out * out.nt);
  std::optional<std::vector<double>> b;
  if (field.has_b()) b.emplace(3 * s_out * out.nt);
  for (int n = 0; n < out.nt; ++n) {
    const int src = source[n];
    for (int c = 0; c < 3; ++c) {
      resample(field.u_slice(src, c), lambda, u.data() + (3 * n + c) * s_out);
      if (b) resample(field.b_slice(src, c), lambda, b->data() + (3 * n + c) * s_out);
    }
    resample(field.p_slice(src), l2, p.data() + n * s_out);
  }

  Metadata meta = field.metadata();
  meta["rescale_lambda"] = fmt_double(lambda);
  return SpaceTimeField(out, std::move(u), std::move(p), std::move(b), std::move(meta));
}

double max_relative_divergence(const SpaceTimeField& field) {
  const Grid& g = field.grid();
  SpectralOps ops(g.nx, g.ny, g.nz, g.lx, g.ly, g.lz);
  double worst = 0.0;
  const double umax = field.max_abs_u();
  if (umax == 0.0) return 0.0;
  for (int n = 0; n < g.nt; ++n) {
    auto div = ops.divergence(field.u_slice(n));
    for (double d : div) worst = std::max(worst, std::abs(d));
  }
  return worst / umax;
}

}  // namespace parreg
