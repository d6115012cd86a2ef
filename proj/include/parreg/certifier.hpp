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

#include <optional>
#include <string>
#include <vector>

#include "parreg/functionals.hpp"
#include "parreg/lab.hpp"

namespace parreg {

struct Eps1Result {
  double value = 0.0;  // C(z, R) + D(z, R)
  double error = 0.0;
  bool passes = false;  // value < eps1
};

/// R^{-2} int_{Q(z,R)} |U|^3 + |P|^{3/2} < eps1. Domain error when Q(z, R)
/// is not inside the data.
Eps1Result check_ckn_eps1(const FunctionalEngine& engine, const SpacetimePoint& z, double r,
                          double eps1);

struct GradientRung {
  double r = 0.0;
  double e = 0.0;
  double error = 0.0;
};

struct GradientReport {
  std::vector<GradientRung> ladder;  // decreasing r
  bool passes = false;               // E at the smallest rung < eps2
  bool non_increasing = false;       // E never grows as r shrinks
  std::string label = "resolution-limited proxy for limsup";
};

/// Dyadic ladder r_max, r_max/2, ... down to r_min. r_max defaults to the
/// largest radius whose cylinder fits the box and the data. Resolution error
/// when r_min < 2h; Geometry error when the ladder is empty.
GradientReport check_gradient_criterion(const FunctionalEngine& engine, const SpacetimePoint& z,
                                        double r_min, double eps2,
                                        std::optional<double> r_max = std::nullopt);

enum class Verdict { RegularCertified, HypothesisFailed, BoundChainFailed };

const char* to_string(Verdict v);

struct CertificateReport {
  SpacetimePoint z;
  double rho = 0.0;
  ParameterSchedule schedule;
  double theta = 0.0;
  std::vector<double> radii;  // R_0 .. R_N

  double hypothesis_lhs = 0.0;  // integral over Q(z, 2 rho)
  double hypothesis_rhs = 0.0;  // (2 rho)^{5/3 - gamma} eps
  double hypothesis_error = 0.0;

  double step1_a_actual = 0.0, step1_a_bound = 0.0;
  double step1_e_actual = 0.0, step1_e_bound = 0.0;

  std::vector<double> d_values, c_values;  // D(R_j), C(R_j)
  double term_i = 0.0, term_i_bound = 0.0;
  double term_ii = 0.0, term_ii_bound = 0.0;
  double final_dc = 0.0;         // D(R_N) + C(R_N)
  double final_dc_bound = 0.0;   // (K2^N K3 + 4 K2^N K1 K3^{3/2}) eps^{9/10}
  double quadrature_error = 0.0;  // largest relative error estimate used

  bool rho_below_rho0 = false;
  bool theta_below_half = false;

  /// Links of the bound chain that did not hold numerically.
  std::vector<std::string> failed_links;
  Verdict verdict = Verdict::HypothesisFailed;
  std::string detail;
};

/// Full iteration certificate at z. The hypothesis is checked on Q(z, 2 rho).
/// rho >= rho0 is allowed and flagged. Resolution error when R_N < 2h
/// (the message names the smallest usable rho); Domain error when Q(z, 2 rho)
/// leaves the data.
CertificateReport certify_theorem1(const FunctionalEngine& engine, const SpacetimePoint& z,
                                   double rho, const ParameterSchedule& schedule,
                                   TimeWindowMode mode = TimeWindowMode::PaperLiteral);

/// Smallest rho with R_N(rho) >= 2h.
double minimal_certifiable_rho(const ParameterSchedule& schedule, double h);

struct ScanCriteria {
  bool eps1 = true;
  bool gradient = false;
  bool theorem1 = false;
  std::vector<double> radii;  // eps1 radii and theorem1 rho values
  double gradient_r_min = 0.0;  // 0: use 2h
  CriteriaConstants constants;
  double gamma = 0.1;
  TimeWindowMode mode = TimeWindowMode::PaperLiteral;
  int threads = 1;
};

struct ScanPoint {
  SpacetimePoint z;
  bool candidate = false;
  bool skipped = false;  // no criterion could be evaluated
  std::string note;
  int radii_tested = 0;
  std::optional<bool> eps1_pass;
  double eps1_min_value = 0.0;
  std::optional<bool> gradient_pass;
  double gradient_last_e = 0.0;
  std::optional<bool> theorem1_pass;
};

struct ScanReport {
  std::vector<ScanPoint> points;  // sorted lexicographically by (x, y, z, t)
  std::vector<SpacetimePoint> candidates;
  int skipped = 0;
};

/// A point is a candidate when every enabled criterion fails at every tested
/// radius at or above the resolution floor.
ScanReport scan_candidates(const FunctionalEngine& engine, const std::vector<SpacetimePoint>& points,
                           const ScanCriteria& criteria);

}  // namespace parreg
