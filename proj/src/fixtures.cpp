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

#include <cmath>

#include "parreg/coverdim.hpp"
#include "parreg/error.hpp"

namespace parreg {

namespace {

constexpr std::size_t kMaxFixturePoints = 4'000'000;

void check_size(double n) {
  if (!(n >= 1.0) || n > static_cast<double>(kMaxFixturePoints))
    fail(ErrorCode::Range, "fixture size out of range");
}

}  // namespace

PointSet4D fixture_lattice(int n) {
  check_size(std::pow(static_cast<double>(n), 5));
  const int nt = n * n;
  std::vector<Point4> pts;
  pts.reserve(static_cast<std::size_t>(n) * n * n * nt);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < nt; ++l)
          pts.push_back({(i + 0.5) / n, (j + 0.5) / n, (k + 0.5) / n, (l + 0.5) / nt});
  return PointSet4D(std::move(pts));
}

PointSet4D fixture_time_segment(std::size_t m, const Vec3& x0) {
  check_size(static_cast<double>(m));
  std::vector<Point4> pts;
  pts.reserve(m);
  for (std::size_t q = 0; q < m; ++q)
    pts.push_back({x0[0], x0[1], x0[2], (q + 0.5) / static_cast<double>(m)});
  return PointSet4D(std::move(pts));
}

PointSet4D fixture_space_segment(std::size_t m, double t) {
  check_size(static_cast<double>(m));
  std::vector<Point4> pts;
  pts.reserve(m);
  for (std::size_t q = 0; q < m; ++q)
    pts.push_back({(q + 0.5) / static_cast<double>(m), 0.5, 0.5, t});
  return PointSet4D(std::move(pts));
}

std::vector<double> cantor_centers(int depth) {
  if (depth < 0 || depth > 21) fail(ErrorCode::Range, "cantor depth must lie in [0, 21]");
  std::vector<double> left{0.0};
  double len = 1.0;
  for (int d = 0; d < depth; ++d) {
    len /= 3.0;
    std::vector<double> next;
    next.reserve(left.size() * 2);
    for (double a : left) {
      next.push_back(a);
      next.push_back(a + 2.0 * len);
    }
    left = std::move(next);
  }
  for (double& a : left) a += 0.5 * len;
  return left;
}

PointSet4D fixture_cantor_time(int depth) {
  std::vector<Point4> pts;
  for (double t : cantor_centers(depth)) pts.push_back({0.5, 0.5, 0.5, t});
  return PointSet4D(std::move(pts));
}

PointSet4D fixture_cantor_space(int depth) {
  std::vector<Point4> pts;
  for (double x : cantor_centers(depth)) pts.push_back({x, 0.5, 0.5, 0.5});
  return PointSet4D(std::move(pts));
}

PointSet4D fixture_inverse_integers(std::size_t n) {
  check_size(static_cast<double>(n));
  std::vector<Point4> pts;
  pts.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) pts.push_back({1.0 / static_cast<double>(k), 0.0, 0.0, 0.0});
  return PointSet4D(std::move(pts));
}

PointSet4D fixture_product(const PointSet4D& space, const PointSet4D& time) {
  check_size(static_cast<double>(space.size()) * static_cast<double>(time.size()));
  std::vector<Point4> pts;
  pts.reserve(space.size() * time.size());
  for (const auto& a : space.points())
    for (const auto& b : time.points()) pts.push_back({a[0], a[1], a[2], b[3]});
  return PointSet4D(std::move(pts));
}

std::vector<std::string> fixture_names() {
  return {"lattice",      "time_segment", "space_segment", "inverse_integers",
          "cantor_time",  "cantor_space", "cantor_space_x_time_segment"};
}

NamedFixture named_fixture(const std::string& name) {
  NamedFixture f;
  auto powers = [](double base, int from, int to) {
    std::vector<double> out;
    for (int k = from; k <= to; ++k) out.push_back(std::pow(base, -k));
    return out;
  };
  if (name == "lattice") {
    // Box sides 1/k with k dividing 10 align with the lattice cells.
    f.points = fixture_lattice(10);
    f.ladder = {1.0, 0.5, 0.2, 0.1};
    f.expected_dimension = 5.0;
  } else if (name == "time_segment") {
    f.points = fixture_time_segment(std::size_t{1} << 19);
    f.ladder = powers(2.0, 1, 9);
    f.expected_dimension = 2.0;
  } else if (name == "space_segment") {
    f.points = fixture_space_segment(std::size_t{1} << 16);
    f.ladder = powers(2.0, 1, 12);
    f.expected_dimension = 1.0;
  } else if (name == "inverse_integers") {
    f.points = fixture_inverse_integers(10000);
    f.ladder = powers(2.0, 4, 10);
    f.expected_dimension = 0.5;
  } else if (name == "cantor_time") {
    f.points = fixture_cantor_time(14);
    // Temporal side r^2 = 3^{-k}.
    f.ladder = powers(std::sqrt(3.0), 1, 12);
    f.expected_dimension = 2.0 * std::log(2.0) / std::log(3.0);
  } else if (name == "cantor_space") {
    f.points = fixture_cantor_space(14);
    f.ladder = powers(3.0, 1, 12);
    f.expected_dimension = std::log(2.0) / std::log(3.0);
  } else if (name == "cantor_space_x_time_segment") {
    f.points = fixture_product(fixture_cantor_space(6), fixture_time_segment(6561));
    f.ladder = powers(3.0, 1, 4);
    f.expected_dimension = std::log(2.0) / std::log(3.0) + 2.0;
  } else {
    fail(ErrorCode::InvalidArgument, "unknown fixture: " + name);
  }
  return f;
}

}  // namespace parreg
