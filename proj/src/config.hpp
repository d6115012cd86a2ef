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

// Strict JSON run configurations. Every parser rejects unknown keys and
// wrong types with ErrorCode::Configuration before any computation starts.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "parreg/certifier.hpp"
#include "parreg/coverdim.hpp"
#include "parreg/field.hpp"
#include "parreg/lab.hpp"
#include "parreg/spectral.hpp"

namespace parreg::config {

using Json = nlohmann::json;

/// Parses text; syntax errors become Configuration errors.
Json parse_text(const std::string& text);

/// {nx, ny, nz, lx, ly, lz, nt, t0, dt}; box lengths default to 2 pi.
Grid parse_grid(const Json& j, const std::string& where);
SolverConfig parse_solver(const Json& j);
CriteriaConstants parse_constants(const Json& j);
std::vector<SpacetimePoint> parse_points(const Json& j, const std::string& where);

struct GenerateConfig {
  std::string generator;  // beltrami, beltrami_mhd, constant, zero, near_singular
  Grid grid;
  double a = 1.0, b = 1.0, c = 1.0, b_scale = 0.5;
  Vec3 u0{0.0, 0.0, 0.0};
  double p0 = 0.0;
  double exponent = 1.0;
  SpacetimePoint center;
  std::optional<double> cap;
  std::optional<double> rescale_lambda;
  std::string output = "field";
};
GenerateConfig parse_generate(const Json& j);
SpaceTimeField run_generate(const GenerateConfig& cfg);

struct SolveConfig {
  SolverConfig solver;
  std::string output = "field";
};
SolveConfig parse_solve(const Json& j);

struct FunctionalQuery {
  SpacetimePoint z;
  double r = 0.0;
};

struct FunctionalsConfig {
  std::string field;
  std::vector<FunctionalQuery> queries;
  TimeWindowMode mode = TimeWindowMode::PaperLiteral;
  bool mhd = false;
  int threads = 1;
};
FunctionalsConfig parse_functionals(const Json& j);
/// A bare query list [{"x": [..], "t": .., "r": ..}, ...].
std::vector<FunctionalQuery> parse_queries(const Json& j);

struct CertifyConfig {
  std::string field;
  std::vector<SpacetimePoint> points;
  double rho = 0.3;
  double gamma = 0.1;
  double eps_fraction = 0.9;
  CriteriaConstants constants;
  TimeWindowMode mode = TimeWindowMode::PaperLiteral;
  int threads = 1;
};
CertifyConfig parse_certify(const Json& j);

struct ScanConfig {
  std::string field;
  std::vector<SpacetimePoint> points;  // explicit points or the expanded lattice
  ScanCriteria criteria;
};
/// Points from "points" or from "lattice": {nx, ny, nz, times}, whose nodes
/// are cell-centered in the field's box (needs the grid for the box size).
ScanConfig parse_scan(const Json& j, const Grid* grid);

struct LemmasConfig {
  std::string field;
  LemmaQuery query;
  CriteriaConstants constants;
  bool interpolation = true;
  bool pressure = true;
};
LemmasConfig parse_lemmas(const Json& j);

struct PointSource {
  std::string path;     // CSV
  std::string fixture;  // or a named fixture
};

struct CoverConfig {
  PointSource source;
  double r = 0.0;
  bool with_cover = false;
  bool vitali = true;
  std::optional<std::string> budget_field;
  double budget_gamma = 0.1;
  std::optional<double> budget_eps;  // defaults to the schedule's eps
  int threads = 1;
};
CoverConfig parse_cover(const Json& j);

struct HausdorffConfig {
  double alpha = 0.0;
  std::vector<double> deltas;
  int depth = 12;
};

struct DimensionConfig {
  PointSource source;
  std::vector<double> ladder;  // empty: the fixture's own ladder
  std::optional<HausdorffConfig> hausdorff;
  int threads = 1;
};
DimensionConfig parse_dimension(const Json& j);

/// Schema check for a CLI subcommand (generate, solve, functionals, certify,
/// scan, cover, dimension, verify-lemmas).
void validate_run_config(const std::string& subcommand, const Json& j);

}  // namespace parreg::config
