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

#include "parreg/coverdim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "parreg/error.hpp"

namespace parreg {

namespace {

using Key = std::array<std::int64_t, 4>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : k) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

std::int64_t cell_of(double v, double side) {
  const double q = std::floor(v / side);
  if (!(std::abs(q) < 9.0e18)) fail(ErrorCode::Range, "scale too small for the point coordinates");
  return static_cast<std::int64_t>(q);
}

Key box_key(const Point4& p, double r) {
  return {cell_of(p[0], r), cell_of(p[1], r), cell_of(p[2], r), cell_of(p[3], r * r)};
}

void check_scale(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCode::InvalidArgument, "scale must be positive");
}

std::vector<Key> occupied_boxes(const PointSet4D& s, double r, int threads) {
  const auto& pts = s.points();
  const std::size_t n = pts.size();
  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(n / 4096) + 1));
  std::vector<std::vector<Key>> parts(nthreads);
  auto work = [&](int w) {
    const std::size_t lo = n * w / nthreads, hi = n * (w + 1) / nthreads;
    auto& out = parts[w];
    out.reserve(hi - lo);
    for (std::size_t q = lo; q < hi; ++q) out.push_back(box_key(pts[q], r));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  };
  if (nthreads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nthreads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  std::vector<Key> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

double spatial_dist2(const Point4& a, const Point4& b, const Vec3& period) {
  double d2 = 0.0;
  for (int c = 0; c < 3; ++c) {
    double d = std::abs(a[c] - b[c]);
    if (period[c] > 0.0) {
      d = std::fmod(d, period[c]);
      d = std::min(d, period[c] - d);
    }
    d2 += d * d;
  }
  return d2;
}

bool cylinders_meet(const Point4& a, const Point4& b, double r, const Vec3& period) {
  return spatial_dist2(a, b, period) < 4.0 * r * r && std::abs(a[3] - b[3]) < r * r;
}

// Greedy selection in the set's lexicographic order; a spatial hash with cells
// of side 2r and r^2 limits each removal pass to neighboring cells.
std::vector<Point4> greedy_disjoint(const PointSet4D& s, double r, const Vec3& period) {
  const auto& pts = s.points();
  const double side = 2.0 * r;
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> bins;
  bool periodic = period[0] > 0.0 || period[1] > 0.0 || period[2] > 0.0;
  if (!periodic) {
    for (std::size_t q = 0; q < pts.size(); ++q) {
      const auto& p = pts[q];
      bins[{cell_of(p[0], side), cell_of(p[1], side), cell_of(p[2], side), cell_of(p[3], r * r)}]
          .push_back(q);
    }
  }
  std::vector<char> removed(pts.size(), 0);
  std::vector<Point4> selected;
  for (std::size_t q = 0; q < pts.size(); ++q) {
    if (removed[q]) continue;
    const auto& p = pts[q];
    selected.push_back(p);
    removed[q] = 1;
    if (periodic) {
      for (std::size_t o = q + 1; o < pts.size(); ++o)
        if (!removed[o] && cylinders_meet(p, pts[o], r, period)) removed[o] = 1;
      continue;
    }
    const Key k{cell_of(p[0], side), cell_of(p[1], side), cell_of(p[2], side),
                cell_of(p[3], r * r)};
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c)
          for (int d = -1; d <= 1; ++d) {
            auto it = bins.find({k[0] + a, k[1] + b, k[2] + c, k[3] + d});
            if (it == bins.end()) continue;
            for (std::size_t o : it->second)
              if (!removed[o] && cylinders_meet(p, pts[o], r, period)) removed[o] = 1;
          }
  }
  return selected;
}

}  // namespace

// ---------------------------------------------------------------------------

PointSet4D::PointSet4D(std::vector<Point4> points) : points_(std::move(points)) {
  for (const auto& p : points_)
    for (double v : p)
      if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "non-finite point coordinate");
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

Point4 PointSet4D::lower() const {
  if (points_.empty()) fail(ErrorCode::InvalidArgument, "empty point set");
  Point4 lo = points_.front();
  for (const auto& p : points_)
    for (int c = 0; c < 4; ++c) lo[c] = std::min(lo[c], p[c]);
  return lo;
}

Point4 PointSet4D::upper() const {
  if (points_.empty()) fail(ErrorCode::InvalidArgument, "empty point set");
  Point4 hi = points_.front();
  for (const auto& p : points_)
    for (int c = 0; c < 4; ++c) hi[c] = std::max(hi[c], p[c]);
  return hi;
}

PointSet4D PointSet4D::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  std::vector<Point4> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    Point4 p{};
    if (!(ss >> p[0] >> p[1] >> p[2] >> p[3])) {
      if (lineno == 1) continue;  // header
      fail(ErrorCode::InvalidArgument,
           path.string() + ":" + std::to_string(lineno) + ": expected four numbers");
    }
    std::string extra;
    if (ss >> extra)
      fail(ErrorCode::InvalidArgument,
           path.string() + ":" + std::to_string(lineno) + ": trailing data");
    pts.push_back(p);
  }
  return PointSet4D(std::move(pts));
}

void PointSet4D::save_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << "x,y,z,t\n";
  char buf[160];
  for (const auto& p : points_) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p[0], p[1], p[2], p[3]);
    out << buf;
  }
  if (!out) fail(ErrorCode::Io, "write failed: " + path.string());
}

// ---------------------------------------------------------------------------

CoverResult box_count(const PointSet4D& s, double r, bool with_cover, int threads) {
  check_scale(r);
  CoverResult res;
  res.r = r;
  res.cover_radius = std::sqrt(2.0) * r;
  if (s.empty()) {
    res.empty = true;
    return res;
  }
  const auto boxes = occupied_boxes(s, r, threads);
  res.count = boxes.size();
  if (with_cover) {
    // Box [i r, (i+1) r)^3 x [k r^2, (k+1) r^2) sits inside the open cylinder
    // of radius sqrt(2) r centered at its spatial midpoint and time
    // (k + 3/2) r^2.
    res.cover_centers.reserve(boxes.size());
    for (const auto& k : boxes)
      res.cover_centers.push_back({(k[0] + 0.5) * r, (k[1] + 0.5) * r, (k[2] + 0.5) * r,
                                   (k[3] + 1.5) * r * r});
  }
  return res;
}

DimensionEstimate fit_dimension(std::vector<double> scales, std::vector<std::uint64_t> counts) {
  if (scales.size() != counts.size())
    fail(ErrorCode::InvalidArgument, "scales and counts differ in length");
  std::vector<std::size_t> order(scales.size());
  for (std::size_t q = 0; q < order.size(); ++q) order[q] = q;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scales[a] > scales[b]; });
  DimensionEstimate est;
  for (auto q : order) {
    check_scale(scales[q]);
    if (!est.scales.empty() && scales[q] == est.scales.back())
      fail(ErrorCode::Fit, "duplicate scale in ladder");
    if (counts[q] == 0) fail(ErrorCode::Fit, "empty box count; the set has no points");
    est.scales.push_back(scales[q]);
    est.counts.push_back(counts[q]);
  }
  const std::size_t m = est.scales.size();
  if (m < 2) fail(ErrorCode::Fit, "at least two scales are required");

  std::vector<double> xs(m), ys(m);
  double mx = 0.0, my = 0.0;
  for (std::size_t q = 0; q < m; ++q) {
    xs[q] = -std::log(est.scales[q]);
    ys[q] = std::log(static_cast<double>(est.counts[q]));
    mx += xs[q];
    my += ys[q];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t q = 0; q < m; ++q) {
    sxx += (xs[q] - mx) * (xs[q] - mx);
    sxy += (xs[q] - mx) * (ys[q] - my);
  }
  est.raw_slope = sxy / sxx;
  est.intercept = my - est.raw_slope * mx;
  double ss = 0.0;
  for (std::size_t q = 0; q < m; ++q) {
    const double e = ys[q] - (est.intercept + est.raw_slope * xs[q]);
    ss += e * e;
  }
  est.fit_residual = std::sqrt(ss / m);
  est.fitted_dim = std::clamp(est.raw_slope, 0.0, 5.0);

  est.upper = -std::numeric_limits<double>::infinity();
  est.lower = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < m; ++q) {
    const double ratio = est.scales[q] < 1.0 ? ys[q] / xs[q]
                                             : std::numeric_limits<double>::quiet_NaN();
    est.ratios.push_back(ratio);
    if (std::isfinite(ratio)) {
      est.upper = std::max(est.upper, ratio);
      est.lower = std::min(est.lower, ratio);
    }
  }
  if (!std::isfinite(est.upper)) est.upper = est.lower = std::numeric_limits<double>::quiet_NaN();
  est.few_scales = m < 4;
  est.narrow_span = std::log10(est.scales.front() / est.scales.back()) < 2.0;
  return est;
}

DimensionEstimate estimate_minkowski(const PointSet4D& s, std::vector<double> ladder, int threads) {
  if (s.empty()) fail(ErrorCode::Fit, "cannot fit a dimension to an empty set");
  std::vector<std::uint64_t> counts;
  for (double r : ladder) counts.push_back(box_count(s, r, false, threads).count);
  return fit_dimension(std::move(ladder), std::move(counts));
}

// ---------------------------------------------------------------------------

HausdorffEstimate hausdorff_upper(const PointSet4D& s, double alpha, std::vector<double> deltas,
                                  int depth) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    fail(ErrorCode::InvalidArgument, "alpha must be non-negative");
  if (depth < 0 || depth > 20) fail(ErrorCode::InvalidArgument, "depth must lie in [0, 20]");
  if (deltas.empty()) fail(ErrorCode::InvalidArgument, "empty delta ladder");
  HausdorffEstimate est;
  est.alpha = alpha;
  est.depth = depth;
  est.empty = s.empty();
  for (double delta : deltas) {
    check_scale(delta);
    HausdorffLevel lvl;
    lvl.delta = delta;
    const double s0 = delta / std::sqrt(2.0);
    const double s_fine = std::ldexp(s0, -depth);
    lvl.finest_radius = std::sqrt(2.0) * s_fine;
    if (!s.empty()) {
      struct Node {
        Key key;
        double cost;
        std::uint64_t count;
      };
      const double leaf_cost = std::pow(std::sqrt(2.0) * s_fine, alpha);
      std::vector<Node> level;
      for (const auto& k : occupied_boxes(s, s_fine, 1)) level.push_back({k, leaf_cost, 1});
      for (int l = depth - 1; l >= 0; --l) {
        const double own = std::pow(std::sqrt(2.0) * std::ldexp(s0, -l), alpha);
        for (auto& nd : level)
          nd.key = {nd.key[0] >> 1, nd.key[1] >> 1, nd.key[2] >> 1, nd.key[3] >> 2};
        std::sort(level.begin(), level.end(),
                  [](const Node& a, const Node& b) { return a.key < b.key; });
        std::vector<Node> parents;
        for (const auto& nd : level) {
          if (!parents.empty() && parents.back().key == nd.key) {
            parents.back().cost += nd.cost;
            parents.back().count += nd.count;
          } else {
            parents.push_back(nd);
          }
        }
        for (auto& p : parents)
          if (own <= p.cost) {
            p.cost = own;
            p.count = 1;
          }
        level = std::move(parents);
      }
      for (const auto& nd : level) {
        lvl.measure_upper_bound += nd.cost;
        lvl.cylinders += nd.count;
      }
    }
    est.levels.push_back(lvl);
  }
  for (std::size_t q = 1; q < est.levels.size(); ++q) {
    const auto& a = est.levels[q - 1];
    const auto& b = est.levels[q];
    if (b.delta < a.delta && b.measure_upper_bound < a.measure_upper_bound)
      est.monotone_as_delta_decreases = false;
    if (b.delta > a.delta && b.measure_upper_bound > a.measure_upper_bound)
      est.monotone_as_delta_decreases = false;
  }
  return est;
}

// ---------------------------------------------------------------------------

VitaliCheck verify_vitali(const PointSet4D& s, double r, const std::vector<Point4>& selected) {
  check_scale(r);
  const Vec3 none{0.0, 0.0, 0.0};
  VitaliCheck chk;
  chk.pairwise_disjoint = true;
  for (std::size_t a = 0; a < selected.size() && chk.pairwise_disjoint; ++a)
    for (std::size_t b = a + 1; b < selected.size(); ++b)
      if (cylinders_meet(selected[a], selected[b], r, none)) {
        chk.pairwise_disjoint = false;
        break;
      }
  const double big = 25.0 * r * r;
  for (const auto& p : s.points()) {
    bool cov = false, lit = false;
    for (const auto& c : selected) {
      if (spatial_dist2(p, c, none) >= big) continue;
      const double dt = p[3] - c[3];
      if (dt > -13.0 * r * r && dt < 12.0 * r * r) cov = true;
      if (dt > -big && dt < 0.0) lit = true;
      if (cov && lit) break;
    }
    if (!cov) ++chk.uncovered;
    if (!lit) ++chk.uncovered_literal;
  }
  return chk;
}

VitaliResult vitali_disjoint(const PointSet4D& s, double r, bool verify) {
  check_scale(r);
  VitaliResult res;
  res.r = r;
  res.selected = greedy_disjoint(s, r, {0.0, 0.0, 0.0});
  if (verify) res.check = verify_vitali(s, r, res.selected);
  return res;
}

// ---------------------------------------------------------------------------

BudgetReport theorem2_budget(const FunctionalEngine& engine, const PointSet4D& s, double r,
                             double gamma, double eps) {
  check_scale(r);
  if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorCode::InvalidArgument, "eps must be positive");
  if (!std::isfinite(gamma)) fail(ErrorCode::InvalidArgument, "gamma must be finite");
  const Grid& g = engine.field().grid();
  if (2.0 * r >= g.min_side())
    fail(ErrorCode::Geometry, "cylinder diameter does not fit the periodic box");
  const double lengths[3] = {g.lx, g.ly, g.lz};
  for (const auto& p : s.points()) {
    for (int c = 0; c < 3; ++c)
      if (p[c] < 0.0 || p[c] >= lengths[c])
        fail(ErrorCode::Domain, "candidate point lies outside the spatial box");
    if (p[3] < g.t0 || p[3] > g.t_end())
      fail(ErrorCode::Domain, "candidate point lies outside the time range");
  }

  BudgetReport rep;
  rep.r = r;
  rep.gamma = gamma;
  rep.eps = eps;
  rep.k4 = engine.theorem1_domain_integral();
  rep.inconsistent = rep.k4 == 0.0 && !s.empty();

  // Periodic disjointness so that the cell-center stencils never overlap.
  const auto selected = greedy_disjoint(s, r, {g.lx, g.ly, g.lz});
  rep.m = selected.size();
  std::vector<Point4> unit;
  for (const auto& p : s.points())
    if (std::all_of(p.begin(), p.end(), [](double v) { return v >= 0.0 && v <= 1.0; }))
      unit.push_back(p);
  rep.box_count_unit = box_count(PointSet4D(std::move(unit)), r).count;
  rep.m_bound = rep.k4 / eps * std::pow(r, -5.0 / 3.0 + gamma);
  rep.within_bound = static_cast<double>(rep.m) <= rep.m_bound;

  const bool mhd = engine.field().has_b();
  for (const auto& p : selected) {
    const SpacetimePoint z{{p[0], p[1], p[2]}, p[3]};
    double v = 0.0;
    if (p[3] > g.t0) {
      v = mhd ? engine
                    .cylinder_integral({Density::GradU2, Density::U103, Density::P53,
                                        Density::GradB2, Density::B103},
                                       z, r, BallRule::CellCenter)
                    .value
              : engine
                    .cylinder_integral({Density::GradU2, Density::U103, Density::P53}, z, r,
                                       BallRule::CellCenter)
                    .value;
    }
    rep.local_integrals.push_back(v);
    rep.local_sum += v;
  }
  rep.subadditive = rep.local_sum <= rep.k4 * (1.0 + 1e-12);
  return rep;
}

}  // namespace parreg
