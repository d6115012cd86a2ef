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
#include <limits>

#include "parreg/error.hpp"
#include "parreg/lab.hpp"

namespace parreg {

const char* to_string(Lemma lemma) {
  return lemma == Lemma::Interpolation ? "interpolation" : "pressure";
}

namespace {

template <typename Fn>
LemmaReport sweep(const FunctionalEngine& engine, const LemmaQuery& query, Lemma lemma,
                  double configured_k, Fn&& sides) {
  const double theta_max = lemma == Lemma::Pressure ? 0.5 : 1.0;
  for (double r : query.radii)
    if (!(r > 0.0 && r < 1.0)) fail(ErrorCode::Range, "lemma radii must lie in (0, 1)");
  for (double th : query.thetas)
    if (!(th > 0.0 && th < theta_max))
      fail(ErrorCode::Range, lemma == Lemma::Pressure ? "theta must lie in (0, 1/2)"
                                                      : "theta must lie in (0, 1)");
  if (!(configured_k > 0.0)) fail(ErrorCode::Configuration, "configured constant must be positive");

  const double h2 = 2.0 * engine.field().grid().h_max();
  LemmaReport rep;
  rep.lemma = lemma;
  rep.configured_k = configured_k;
  int satisfied = 0;
  for (const auto& z : query.points)
    for (double r : query.radii)
      for (double th : query.thetas) {
        LemmaSample smp;
        smp.z = z;
        smp.r = r;
        smp.theta = th;
        smp.resolved = th * r >= h2;
        if (!smp.resolved) {
          ++rep.unresolved;
          rep.samples.push_back(smp);
          continue;
        }
        ++rep.resolved;
        const auto [lhs, rhs] = sides(z, r, th);
        smp.lhs = lhs;
        smp.rhs_unit = rhs;
        if (rhs > 0.0) {
          smp.k_required = lhs / rhs;
        } else if (lhs > 0.0) {
          smp.violation = true;
          smp.k_required = std::numeric_limits<double>::infinity();
          ++rep.violations;
        }
        smp.satisfied = lhs <= configured_k * rhs;
        if (smp.satisfied) ++satisfied;
        if (!smp.violation) rep.k_required_max = std::max(rep.k_required_max, smp.k_required);
        rep.samples.push_back(smp);
      }
  rep.fraction_satisfied = rep.resolved > 0 ? static_cast<double>(satisfied) / rep.resolved : 1.0;
  return rep;
}

}  // namespace

LemmaReport verify_interpolation(const FunctionalEngine& engine, const LemmaQuery& query,
                                 double configured_k1) {
  return sweep(engine, query, Lemma::Interpolation, configured_k1,
               [&](const SpacetimePoint& z, double r, double th) {
                 const double lhs = engine.C(z, th * r);
                 const double a = engine.A(z, r, query.mode);
                 const double e = engine.E(z, r);
                 const double rhs = std::pow(th, -1.5) * std::pow(a, 0.75) * std::pow(e, 0.75) +
                                    th * th * th * std::pow(a, 1.5);
                 return std::pair{lhs, rhs};
               });
}

LemmaReport verify_pressure(const FunctionalEngine& engine, const LemmaQuery& query,
                            double configured_k2) {
  return sweep(engine, query, Lemma::Pressure, configured_k2,
               [&](const SpacetimePoint& z, double r, double th) {
                 const double lhs = engine.D(z, th * r);
                 const double rhs = th * engine.D(z, r) + engine.C(z, r) / (th * th);
                 return std::pair{lhs, rhs};
               });
}

}  // namespace parreg
