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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "parreg/functionals.hpp"

namespace parreg {

/// (x, y, z, t).
using Point4 = std::array<double, 4>;

/// Finite, deduplicated point set in space-time, kept in lexicographic order.
class PointSet4D {
 public:
  PointSet4D() = default;
  explicit PointSet4D(std::vector<Point4> points);

  const std::vector<Point4>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  Point4 lower() const;
  Point4 upper() const;

  /// CSV with header x,y,z,t (header optional on read).
  static PointSet4D load_csv(const std::filesystem::path& path);
  void save_csv(const std::filesystem::path& path) const;

 private:
  std::vector<Point4> points_;
};

/// Number of aligned parabolic boxes (side r, temporal side r^2) that meet S,
/// with an optional explicit cover by cylinders of radius sqrt(2) r.
struct CoverResult {
  double r = 0.0;
  std::uint64_t count = 0;
  bool empty = false;
  /// A cylinder Q(z, r) meets at most 3^3 * 2 boxes, so count / 54 is a lower
  /// bound on the minimal number of r-cylinders.
  double overcount_factor = 54.0;
  double cover_radius = 0.0;
  std::vector<Point4> cover_centers;
};

CoverResult box_count(const PointSet4D& s, double r, bool with_cover = false, int threads = 1);

struct DimensionEstimate {
  std::vector<double> scales;  // strictly decreasing
  std::vector<std::uint64_t> counts;
  std::vector<double> ratios;  // log N / (-log r); NaN where r >= 1
  double fitted_dim = 0.0;     // raw slope clamped to [0, 5]
  double raw_slope = 0.0;
  double intercept = 0.0;
  double fit_residual = 0.0;   // rms of log N residuals
  double upper = 0.0;          // max ratio over the ladder
  double lower = 0.0;          // min ratio over the ladder
  bool few_scales = false;     // fewer than 4 scales
  bool narrow_span = false;    // less than 2 decades
};

/// Least-squares slope of log N against -log r. Fit error when fewer than two
/// distinct positive scales or an empty count.
DimensionEstimate estimate_minkowski(const PointSet4D& s, std::vector<double> ladder,
                                     int threads = 1);
/// Fit on precomputed counts.
DimensionEstimate fit_dimension(std::vector<double> scales, std::vector<std::uint64_t> counts);

struct HausdorffLevel {
  double delta = 0.0;
  double measure_upper_bound = 0.0;  // sum r_j^alpha of the chosen cover
  std::uint64_t cylinders = 0;
  double finest_radius = 0.0;
};

struct HausdorffEstimate {
  double alpha = 0.0;
  int depth = 0;
  std::vector<HausdorffLevel> levels;  // in the order of the delta ladder
  /// Bounds do not decrease as delta shrinks along the ladder (expected for
  /// the true premeasures; the tree bounds may violate it).
  bool monotone_as_delta_decreases = true;
  bool empty = false;
};

/// Optimal cover within the dyadic parabolic box tree below each delta: every
/// box may be covered by one cylinder of radius sqrt(2) * side or by its 32
/// children.
HausdorffEstimate hausdorff_upper(const PointSet4D& s, double alpha, std::vector<double> deltas,
                                  int depth = 12);

struct VitaliCheck {
  bool pairwise_disjoint = false;
  std::size_t uncovered = 0;          // points outside every dilated cylinder
  std::size_t uncovered_literal = 0;  // points outside every Q(z_j, 5r)
};

struct VitaliResult {
  double r = 0.0;
  std::vector<Point4> selected;
  /// Dilated cylinders are the concentric 5x dilates of Q(z_j, r), namely
  /// Q((x_j, t_j + 12 r^2), 5 r).
  VitaliCheck check;
};

/// Greedy maximal disjoint family in lexicographic order.
VitaliResult vitali_disjoint(const PointSet4D& s, double r, bool verify = true);
/// Brute-force check of disjointness and of the 5r cover.
VitaliCheck verify_vitali(const PointSet4D& s, double r, const std::vector<Point4>& selected);

struct BudgetReport {
  double r = 0.0, gamma = 0.0, eps = 0.0;
  double k4 = 0.0;  // whole-domain integral of |grad U|^2 + |U|^{10/3} + |P|^{5/3}
  std::size_t m = 0;  // Vitali count
  std::uint64_t box_count_unit = 0;  // N(S n [0,1]^4; r)
  double m_bound = 0.0;  // K4 eps^{-1} r^{-5/3 + gamma}
  bool within_bound = false;
  std::vector<double> local_integrals;  // over the disjoint cylinders
  double local_sum = 0.0;
  bool subadditive = false;  // local_sum <= K4 (1 + 1e-12)
  bool inconsistent = false;  // K4 == 0 but the candidate set is not empty
};

/// Domain error when a point lies outside the field's box or time range.
BudgetReport theorem2_budget(const FunctionalEngine& engine, const PointSet4D& s, double r,
                             double gamma, double eps);

// ---------------------------------------------------------------------------
// Fixtures. All lattices are cell-centered so that box boundaries never pass
// through points.

/// n^3 x n^2 lattice filling [0,1]^4.
PointSet4D fixture_lattice(int n);
/// m points on {x0} x [0, 1].
PointSet4D fixture_time_segment(std::size_t m, const Vec3& x0 = {0.5, 0.5, 0.5});
/// m points on [0, 1] x {(y, z)} at time t.
PointSet4D fixture_space_segment(std::size_t m, double t = 0.5);
/// Interval centers of the middle-thirds construction at the given depth.
std::vector<double> cantor_centers(int depth);
PointSet4D fixture_cantor_time(int depth);
PointSet4D fixture_cantor_space(int depth);
/// {(1/k, 0, 0, 0) : k = 1..n}.
PointSet4D fixture_inverse_integers(std::size_t n);
/// Spatial coordinates from `space`, times from `time`.
PointSet4D fixture_product(const PointSet4D& space, const PointSet4D& time);

struct NamedFixture {
  PointSet4D points;
  std::vector<double> ladder;
  double expected_dimension = 0.0;
};

/// lattice, time_segment, space_segment, inverse_integers, cantor_time,
/// cantor_space, cantor_space_x_time_segment.
NamedFixture named_fixture(const std::string& name);
std::vector<std::string> fixture_names();

}  // namespace parreg
