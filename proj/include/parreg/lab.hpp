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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "parreg/field.hpp"
#include "parreg/functionals.hpp"

namespace parreg {

/// Regularity-criterion and lemma constants. Defaults are configuration
/// choices, not known values.
struct CriteriaConstants {
  double eps1 = 0.01;
  double eps2 = 0.01;
  double zeta = 0.01;
  double k1 = 2.0;
  double k2 = 2.0;

  void validate() const;
};

/// 40 (64 pi)^{2/5}.
double k3_constant();

struct ParameterSchedule {
  double gamma = 0.0;
  int n = 0;
  double beta = 0.0;
  double alpha = 0.0;
  double k3 = 0.0;
  CriteriaConstants constants;
  /// Upper bound on epsilon and the chosen value (fraction of the bound).
  /// The logs stay finite when the values underflow for large N.
  double eps_bound = 0.0, log_eps_bound = 0.0;
  double eps = 0.0, log_eps = 0.0;
  double rho0 = 0.0, log_rho0 = 0.0;
  double eps_fraction = 0.9;

  double theta(double rho) const;
  /// R_j = rho^{alpha + j beta}.
  double radius(int j, double rho) const;

  /// Descriptions of every violated invariant; empty when the schedule is
  /// consistent.
  std::vector<std::string> violated_invariants() const;
};

/// Throws Range when gamma is outside (0, 10/63).
ParameterSchedule make_schedule(double gamma, const CriteriaConstants& constants = {},
                                double eps_fraction = 0.9);

/// Smallest N with 1/(6N) < (7/15)(10/63 - gamma), computed exactly for
/// gamma = num/den.
std::int64_t schedule_iterations(std::int64_t num, std::int64_t den);

struct IdentityCheck {
  std::string name;
  std::string relation;  // "=" or "<"
  std::string lhs, rhs;  // exact fractions, or %.17g in the floating fallback
  double value = 0.0;    // lhs
  bool holds = false;
  bool positive = false;
  bool positivity_required = false;
};

struct IdentityReport {
  std::string gamma;  // as given
  bool exact = true;  // false: floating fallback with 1e-12 tolerance
  std::int64_t n = 0;
  std::string beta, alpha;
  std::vector<IdentityCheck> checks;
  bool passed = false;
};

/// Exact rational check for gamma = num/den (den > 0). Also checks both
/// summed exponents of the term II bound and the C(R_j) exponents at j = 0, 1 and N (they
/// are affine in j).
IdentityReport check_schedule_identities(std::int64_t num, std::int64_t den);
/// Accepts "p/q", integers and finite decimals exactly; anything else falls
/// back to floating arithmetic and is flagged.
IdentityReport check_schedule_identities(const std::string& gamma);
IdentityReport check_schedule_identities(const ParameterSchedule& schedule);

// ---------------------------------------------------------------------------
// Empirical lemma constants

enum class Lemma { Interpolation, Pressure };

const char* to_string(Lemma lemma);

struct LemmaSample {
  SpacetimePoint z;
  double r = 0.0;
  double theta = 0.0;
  double lhs = 0.0;
  double rhs_unit = 0.0;   // right-hand side with the constant set to 1
  double k_required = 0.0;  // lhs / rhs_unit; +inf for violations
  bool resolved = true;     // theta r >= 2 h
  bool violation = false;   // rhs_unit == 0 < lhs
  bool satisfied = false;   // lhs <= configured_k * rhs_unit
};

struct LemmaReport {
  Lemma lemma = Lemma::Interpolation;
  double configured_k = 0.0;
  std::vector<LemmaSample> samples;
  double k_required_max = 0.0;  // over resolved, non-violating samples
  double fraction_satisfied = 0.0;
  int resolved = 0;
  int unresolved = 0;
  int violations = 0;
};

struct LemmaQuery {
  std::vector<SpacetimePoint> points;
  std::vector<double> radii;
  std::vector<double> thetas;
  TimeWindowMode mode = TimeWindowMode::PaperLiteral;
};

/// C(theta r) <= k (theta^{-3/2} A(r)^{3/4} E(r)^{3/4} + theta^3 A(r)^{3/2}).
LemmaReport verify_interpolation(const FunctionalEngine& engine, const LemmaQuery& query,
                                 double configured_k1);
/// D(theta r) <= k (theta D(r) + theta^{-2} C(r)).
LemmaReport verify_pressure(const FunctionalEngine& engine, const LemmaQuery& query,
                            double configured_k2);

}  // namespace parreg
