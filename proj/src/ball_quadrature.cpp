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
#include <numbers>

#include "parreg/error.hpp"
#include "parreg/functionals.hpp"

namespace parreg {

namespace {

constexpr double kTinySlope = 1e-6;

double cube3(double x) { return x > 0.0 ? x * x * x : 0.0; }
double square2(double x) { return x > 0.0 ? x * x : 0.0; }

int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

// Area of the unit square below m2 u + m3 v = alpha, m2 + m3 = 1.
double square_line_fraction(double m2, double m3, double alpha) {
  if (m2 > m3) std::swap(m2, m3);
  if (m2 < kTinySlope) return std::clamp((alpha - 0.5 * m2) / m3, 0.0, 1.0);
  const double a = alpha * alpha - square2(alpha - m2) - square2(alpha - m3) +
                   square2(alpha - 1.0);
  return std::clamp(a / (2.0 * m2 * m3), 0.0, 1.0);
}

}  // namespace

double cube_plane_fraction(double m1, double m2, double m3, double alpha) {
  if (alpha <= 0.0) return 0.0;
  if (alpha >= 1.0) return 1.0;
  if (alpha > 0.5) return 1.0 - cube_plane_fraction(m1, m2, m3, 1.0 - alpha);
  std::array<double, 3> m{m1, m2, m3};
  std::sort(m.begin(), m.end());
  if (m[0] < kTinySlope) {
    // Drop the nearly parallel axis; u1 averages to 1/2 over the cell.
    const double rest = m[1] + m[2];
    return square_line_fraction(m[1] / rest, m[2] / rest, (alpha - 0.5 * m[0]) / rest);
  }
  const double v = cube3(alpha) - cube3(alpha - m[0]) - cube3(alpha - m[1]) -
                   cube3(alpha - m[2]) + cube3(alpha - m[0] - m[1]) +
                   cube3(alpha - m[0] - m[2]) + cube3(alpha - m[1] - m[2]) - cube3(alpha - 1.0);
  return std::clamp(v / (6.0 * m[0] * m[1] * m[2]), 0.0, 1.0);
}

double cell_ball_fraction(const Vec3& offset, const Vec3& h, double r) {
  const double d = std::sqrt(offset[0] * offset[0] + offset[1] * offset[1] + offset[2] * offset[2]);
  const double half_diag = 0.5 * std::sqrt(h[0] * h[0] + h[1] * h[1] + h[2] * h[2]);
  if (d <= r - half_diag) return 1.0;
  if (d >= r + half_diag) return 0.0;
  if (d == 0.0) {
    const double ball = 4.0 / 3.0 * std::numbers::pi * r * r * r;
    return std::min(1.0, ball / (h[0] * h[1] * h[2]));
  }
  // Half-space n.(p - c) <= r - d through the cell around c, n = offset/d.
  std::array<double, 3> a{};
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    a[i] = std::abs(offset[i]) / d * h[i];
    sum += a[i];
  }
  const double alpha = (r - d + 0.5 * sum) / sum;
  return cube_plane_fraction(a[0] / sum, a[1] / sum, a[2] / sum, alpha);
}

std::vector<BallWeight> ball_stencil(const Grid& grid, const Vec3& center, double r,
                                     BallRule rule) {
  if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCode::InvalidArgument, "radius must be positive");
  if (2.0 * r >= grid.min_side())
    fail(ErrorCode::Geometry, "ball diameter " + std::to_string(2.0 * r) +
                                  " does not fit the periodic box");
  const Vec3 h{grid.hx(), grid.hy(), grid.hz()};
  const double half_diag = 0.5 * std::sqrt(h[0] * h[0] + h[1] * h[1] + h[2] * h[2]);
  const double reach = r + half_diag;
  const double cell = grid.cell_volume();
  std::array<int, 3> lo{}, hi{};
  for (int a = 0; a < 3; ++a) {
    lo[a] = static_cast<int>(std::ceil((center[a] - reach) / h[a]));
    hi[a] = static_cast<int>(std::floor((center[a] + reach) / h[a]));
  }
  std::vector<BallWeight> out;
  for (int i = lo[0]; i <= hi[0]; ++i) {
    const double ox = i * h[0] - center[0];
    for (int j = lo[1]; j <= hi[1]; ++j) {
      const double oy = j * h[1] - center[1];
      for (int k = lo[2]; k <= hi[2]; ++k) {
        const double oz = k * h[2] - center[2];
        const double f = rule == BallRule::PlaneCut
                             ? cell_ball_fraction({ox, oy, oz}, h, r)
                             : (ox * ox + oy * oy + oz * oz < r * r ? 1.0 : 0.0);
        if (f <= 0.0) continue;
        out.push_back({grid.index(wrap(i, grid.nx), wrap(j, grid.ny), wrap(k, grid.nz)),
                       f * cell});
      }
    }
  }
  return out;
}

std::vector<TimeWeight> time_weights(const Grid& grid, double a, double b) {
  const double tol = 1e-12 * std::max(1.0, std::abs(grid.t_end())) + 1e-9 * grid.dt;
  if (b < a) fail(ErrorCode::InvalidArgument, "time interval is reversed");
  if (a < grid.t0 - tol || b > grid.t_end() + tol)
    fail(ErrorCode::Domain, "time interval leaves the data range");
  a = std::max(a, grid.t0);
  b = std::min(b, grid.t_end());
  std::vector<double> w(grid.nt, 0.0);
  for (int n = 0; n + 1 < grid.nt; ++n) {
    const double s0 = grid.time(n), s1 = grid.time(n + 1);
    const double lo = std::max(a, s0), hi = std::min(b, s1);
    if (!(hi > lo)) continue;
    const double l0 = (lo - s0) / grid.dt, l1 = (hi - s0) / grid.dt;
    const double len = hi - lo;
    w[n] += 0.5 * len * ((1.0 - l0) + (1.0 - l1));
    w[n + 1] += 0.5 * len * (l0 + l1);
  }
  std::vector<TimeWeight> out;
  for (int n = 0; n < grid.nt; ++n)
    if (w[n] != 0.0) out.push_back({n, w[n]});
  return out;
}

}  // namespace parreg
