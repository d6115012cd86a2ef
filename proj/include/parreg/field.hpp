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

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace parreg {

using Vec3 = std::array<double, 3>;

/// Periodic spatial box discretized by nx*ny*nz points times nt uniform time
/// samples. Grid point (i,j,k) sits at (i*hx, j*hy, k*hz).
struct Grid {
  int nx = 0, ny = 0, nz = 0;
  double lx = 0.0, ly = 0.0, lz = 0.0;
  int nt = 0;
  double t0 = 0.0;
  double dt = 0.0;

  double hx() const { return lx / nx; }
  double hy() const { return ly / ny; }
  double hz() const { return lz / nz; }
  double h_max() const;
  double min_side() const;
  double cell_volume() const { return hx() * hy() * hz(); }
  double time(int n) const { return t0 + n * dt; }
  double t_end() const { return t0 + (nt - 1) * dt; }
  std::size_t spatial_size() const {
    return static_cast<std::size_t>(nx) * ny * nz;
  }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * ny + j) * nz + k;
  }

  /// Throws Configuration when any invariant (n >= 4, nt >= 2, positive
  /// lengths and dt) is violated.
  void validate() const;
};

bool operator==(const Grid& a, const Grid& b);

/// A space-time point z = (x, t).
struct SpacetimePoint {
  Vec3 x{0.0, 0.0, 0.0};
  double t = 0.0;
};

/// Q(z, r) = B(x, r) x (t - r^2, t), balls taken periodically in space.
struct ParabolicCylinder {
  SpacetimePoint z;
  double r = 0.0;
};

using Metadata = std::map<std::string, std::string>;

/// Immutable discretized (U, P[, B]) on a Grid.
///
/// Layout: u and b are (nt, 3, nx, ny, nz), p is (nt, nx, ny, nz), z fastest.
class SpaceTimeField {
 public:
  SpaceTimeField(Grid grid, std::vector<double> u, std::vector<double> p,
                 std::optional<std::vector<double>> b = std::nullopt,
                 Metadata metadata = {});

  const Grid& grid() const { return grid_; }
  bool has_b() const { return b_.has_value(); }
  const Metadata& metadata() const { return metadata_; }

  std::span<const double> u() const { return u_; }
  std::span<const double> p() const { return p_; }
  std::span<const double> b() const;

  /// Component c of U at time sample n.
  std::span<const double> u_slice(int n, int c) const;
  /// All three components of U at sample n, contiguous (3 * spatial_size).
  std::span<const double> u_slice(int n) const;
  std::span<const double> p_slice(int n) const;
  std::span<const double> b_slice(int n, int c) const;
  std::span<const double> b_slice(int n) const;

  double max_abs_u() const;

 private:
  Grid grid_;
  std::vector<double> u_;
  std::vector<double> p_;
  std::optional<std::vector<double>> b_;
  Metadata metadata_;
};

/// Minimum-image displacement a - b on a periodic axis of length l.
double periodic_delta(double a, double b, double l);

/// Exact decaying ABC (Beltrami) solution on a (2*pi)^3 box with unit
/// viscosity: U = e^{-(t-t0)} (a sin z + c cos y, b sin x + a cos z,
/// c sin y + b cos x), P = -|U|^2/2 minus its spatial mean.
SpaceTimeField generate_beltrami(const Grid& grid, double a, double b, double c);

/// Beltrami velocity with B = b_scale * U. Exact for the MHD system with
/// P = -(1 - b_scale^2)|U|^2/2 (mean removed).
SpaceTimeField generate_beltrami_mhd(const Grid& grid, double a, double b,
                                     double c, double b_scale);

SpaceTimeField generate_constant(const Grid& grid, const Vec3& u0, double p0);

/// Synthetic blow-up profile: |U(y,s)| = min(cap, dist^{-exponent}) along the
/// fixed direction (1,1,1)/sqrt(3), with dist the periodic parabolic distance
/// max(|y-x|, sqrt|s-t|) to `center`; P = 0. Not a Navier-Stokes solution.
/// `cap` defaults to (h_min/2)^{-exponent}.
SpaceTimeField generate_near_singular(const Grid& grid, double exponent,
                                      const SpacetimePoint& center,
                                      std::optional<double> cap = std::nullopt);

double parabolic_distance(const Grid& grid, const Vec3& y, double s,
                          const SpacetimePoint& center);

struct RescaleOptions {
  /// Output resolution; defaults to the input counts. Different counts are
  /// reached by trigonometric interpolation.
  std::optional<std::array<int, 3>> resolution;
  /// Output time axis; defaults to (t0/lambda^2, nt, dt/lambda^2).
  std::optional<double> t0;
  std::optional<int> nt;
  std::optional<double> dt;
};

/// U_l(x,t) = l U(l x, l^2 t), P_l(x,t) = l^2 P(l x, l^2 t) (and B like U) on
/// the box (lx/l, ly/l, lz/l). Output time samples map to the nearest input
/// sample; an output time outside the input range (beyond half a step) is a
/// Domain error.
SpaceTimeField rescale(const SpaceTimeField& field, double lambda,
                       const RescaleOptions& options = {});

/// Max over samples of the spectral divergence relative to max|u|.
double max_relative_divergence(const SpaceTimeField& field);

}  // namespace parreg
