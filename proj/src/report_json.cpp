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

#include "report_json.hpp"

#include <cmath>
#include <cstdio>

namespace parreg::report {

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json point4(const Point4& p) { return Json::array({p[0], p[1], p[2], p[3]}); }

}  // namespace

Json to_json(const Grid& g) {
  return {{"nx", g.nx}, {"ny", g.ny}, {"nz", g.nz}, {"lx", g.lx}, {"ly", g.ly},
          {"lz", g.lz}, {"nt", g.nt}, {"t0", g.t0}, {"dt", g.dt}};
}

Json to_json(const SpacetimePoint& z) {
  return {{"x", Json::array({z.x[0], z.x[1], z.x[2]})}, {"t", z.t}};
}

Json to_json(const FunctionalValues& v) {
  return {{"z", to_json(v.z)},
          {"r", v.r},
          {"A", number(v.a)},
          {"E", number(v.e)},
          {"C", number(v.c)},
          {"D", number(v.d)},
          {"err_A", number(v.err_a)},
          {"err_E", number(v.err_e)},
          {"err_C", number(v.err_c)},
          {"err_D", number(v.err_d)},
          {"estimated_quadrature_error", number(v.estimated_quadrature_error)}};
}

Json to_json(const CriteriaConstants& c) {
  return {{"eps1", c.eps1}, {"eps2", c.eps2}, {"zeta", c.zeta}, {"k1", c.k1}, {"k2", c.k2}};
}

Json to_json(const ParameterSchedule& s) {
  Json violated = Json::array();
  for (const auto& v : s.violated_invariants()) violated.push_back(v);
  return {{"gamma", s.gamma},
          {"N", s.n},
          {"beta", s.beta},
          {"alpha", s.alpha},
          {"K3", s.k3},
          {"constants", to_json(s.constants)},
          {"eps_fraction", s.eps_fraction},
          {"eps_bound", number(s.eps_bound)},
          {"log_eps_bound", number(s.log_eps_bound)},
          {"eps", number(s.eps)},
          {"log_eps", number(s.log_eps)},
          {"rho0", number(s.rho0)},
          {"log_rho0", number(s.log_rho0)},
          {"violated_invariants", violated}};
}

Json to_json(const IdentityReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"relation", c.relation},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"value", number(c.value)},
                      {"holds", c.holds},
                      {"positive", c.positive},
                      {"positivity_required", c.positivity_required}});
  return {{"gamma", r.gamma}, {"exact", r.exact}, {"N", r.n},           {"beta", r.beta},
          {"alpha", r.alpha}, {"checks", checks}, {"passed", r.passed}};
}

Json to_json(const Eps1Result& r) {
  return {{"value", number(r.value)}, {"error", number(r.error)}, {"passes", r.passes}};
}

Json to_json(const GradientReport& r) {
  Json ladder = Json::array();
  for (const auto& g : r.ladder)
    ladder.push_back({{"r", g.r}, {"E", number(g.e)}, {"error", number(g.error)}});
  return {{"ladder", ladder},
          {"passes", r.passes},
          {"non_increasing", r.non_increasing},
          {"label", r.label}};
}

Json to_json(const CertificateReport& r) {
  Json failed = Json::array();
  for (const auto& f : r.failed_links) failed.push_back(f);
  return {{"z", to_json(r.z)},
          {"rho", r.rho},
          {"schedule", to_json(r.schedule)},
          {"theta", number(r.theta)},
          {"radii", numbers(r.radii)},
          {"hypothesis", {{"cylinder_radius", 2.0 * r.rho},
                          {"lhs", number(r.hypothesis_lhs)},
                          {"rhs", number(r.hypothesis_rhs)},
                          {"error", number(r.hypothesis_error)},
                          {"holds", r.hypothesis_lhs < r.hypothesis_rhs}}},
          {"step1", {{"A_actual", number(r.step1_a_actual)},
                     {"A_bound", number(r.step1_a_bound)},
                     {"E_actual", number(r.step1_e_actual)},
                     {"E_bound", number(r.step1_e_bound)}}},
          {"D_values", numbers(r.d_values)},
          {"C_values", numbers(r.c_values)},
          {"term_I", number(r.term_i)},
          {"term_I_bound", number(r.term_i_bound)},
          {"term_II", number(r.term_ii)},
          {"term_II_bound", number(r.term_ii_bound)},
          {"final_DC", number(r.final_dc)},
          {"final_DC_bound", number(r.final_dc_bound)},
          {"zeta", r.schedule.constants.zeta},
          {"quadrature_error", number(r.quadrature_error)},
          {"rho_below_rho0", r.rho_below_rho0},
          {"theta_below_half", r.theta_below_half},
          {"failed_links", failed},
          {"verdict", to_string(r.verdict)},
          {"detail", r.detail}};
}

Json to_json(const ScanReport& r) {
  Json pts = Json::array();
  for (const auto& p : r.points) {
    Json e = {{"z", to_json(p.z)},
              {"candidate", p.candidate},
              {"skipped", p.skipped},
              {"radii_tested", p.radii_tested},
              {"note", p.note}};
    if (p.eps1_pass) {
      e["eps1_pass"] = *p.eps1_pass;
      e["eps1_min_value"] = number(p.eps1_min_value);
    }
    if (p.gradient_pass) {
      e["gradient_pass"] = *p.gradient_pass;
      e["gradient_last_E"] = number(p.gradient_last_e);
    }
    if (p.theorem1_pass) e["theorem1_pass"] = *p.theorem1_pass;
    pts.push_back(e);
  }
  Json cands = Json::array();
  for (const auto& c : r.candidates) cands.push_back(to_json(c));
  return {{"points", pts},
          {"candidates", cands},
          {"candidate_count", r.candidates.size()},
          {"skipped", r.skipped}};
}

Json to_json(const LemmaReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"z", to_json(s.z)},
                       {"r", s.r},
                       {"theta", s.theta},
                       {"resolved", s.resolved},
                       {"lhs", number(s.lhs)},
                       {"rhs_unit", number(s.rhs_unit)},
                       {"k_required", number(s.k_required)},
                       {"violation", s.violation},
                       {"satisfied", s.satisfied}});
  return {{"lemma", to_string(r.lemma)},
          {"configured_k", r.configured_k},
          {"k_required_max", number(r.k_required_max)},
          {"fraction_satisfied", number(r.fraction_satisfied)},
          {"resolved", r.resolved},
          {"unresolved", r.unresolved},
          {"violations", r.violations},
          {"samples", samples}};
}

Json to_json(const CoverResult& r) {
  Json j = {{"r", r.r},
            {"count", r.count},
            {"empty", r.empty},
            {"overcount_factor", r.overcount_factor},
            {"cover_radius", r.cover_radius}};
  if (!r.cover_centers.empty()) {
    Json c = Json::array();
    for (const auto& p : r.cover_centers) c.push_back(point4(p));
    j["cover_centers"] = c;
  }
  return j;
}

Json to_json(const DimensionEstimate& d) {
  Json counts = Json::array();
  for (auto c : d.counts) counts.push_back(c);
  return {{"scales", numbers(d.scales)},
          {"counts", counts},
          {"ratios", numbers(d.ratios)},
          {"fitted_dimension", number(d.fitted_dim)},
          {"raw_slope", number(d.raw_slope)},
          {"intercept", number(d.intercept)},
          {"fit_residual", number(d.fit_residual)},
          {"upper_ratio", number(d.upper)},
          {"lower_ratio", number(d.lower)},
          {"few_scales", d.few_scales},
          {"narrow_span", d.narrow_span}};
}

Json to_json(const HausdorffEstimate& h) {
  Json levels = Json::array();
  for (const auto& l : h.levels)
    levels.push_back({{"delta", l.delta},
                      {"measure_upper_bound", number(l.measure_upper_bound)},
                      {"cylinders", l.cylinders},
                      {"finest_radius", l.finest_radius}});
  return {{"alpha", h.alpha},
          {"depth", h.depth},
          {"levels", levels},
          {"monotone_as_delta_decreases", h.monotone_as_delta_decreases},
          {"empty", h.empty}};
}

Json to_json(const VitaliResult& v) {
  Json sel = Json::array();
  for (const auto& p : v.selected) sel.push_back(point4(p));
  return {{"r", v.r},
          {"count", v.selected.size()},
          {"selected", sel},
          {"dilate", "concentric: Q((x, t + 12 r^2), 5 r)"},
          {"pairwise_disjoint", v.check.pairwise_disjoint},
          {"uncovered", v.check.uncovered},
          {"uncovered_literal_5r", v.check.uncovered_literal}};
}

Json to_json(const BudgetReport& b) {
  return {{"r", b.r},
          {"gamma", b.gamma},
          {"eps", number(b.eps)},
          {"K4", number(b.k4)},
          {"M", b.m},
          {"box_count_unit", b.box_count_unit},
          {"M_bound", number(b.m_bound)},
          {"within_bound", b.within_bound},
          {"local_integrals", numbers(b.local_integrals)},
          {"local_sum", number(b.local_sum)},
          {"subadditive", b.subadditive},
          {"inconsistent", b.inconsistent}};
}

Json to_json(const SolverDiagnostics& d) {
  return {{"dt", d.dt}, {"steps", d.steps}, {"max_cfl", number(d.max_cfl)},
          {"energy", numbers(d.energy)}};
}

std::string functionals_csv(const std::vector<FunctionalValues>& rows) {
  std::string out = "x,y,z,t,r,A,E,C,D,err\n";
  for (const auto& v : rows) {
    const double vals[] = {v.z.x[0], v.z.x[1], v.z.x[2], v.z.t, v.r,
                           v.a,      v.e,      v.c,      v.d,   v.estimated_quadrature_error};
    for (std::size_t q = 0; q < std::size(vals); ++q) {
      if (q) out += ',';
      out += fmt(vals[q]);
    }
    out += '\n';
  }
  return out;
}

std::string scan_csv(const ScanReport& r) {
  auto tri = [](const std::optional<bool>& b) { return b ? (*b ? "1" : "0") : ""; };
  std::string out =
      "x,y,z,t,candidate,skipped,radii_tested,eps1_pass,eps1_min_value,gradient_pass,"
      "gradient_last_E,theorem1_pass\n";
  for (const auto& p : r.points) {
    out += fmt(p.z.x[0]) + ',' + fmt(p.z.x[1]) + ',' + fmt(p.z.x[2]) + ',' + fmt(p.z.t) + ',';
    out += std::string(p.candidate ? "1" : "0") + ',' + (p.skipped ? "1" : "0") + ',';
    out += std::to_string(p.radii_tested) + ',';
    out += std::string(tri(p.eps1_pass)) + ',' + (p.eps1_pass ? fmt(p.eps1_min_value) : "") + ',';
    out += std::string(tri(p.gradient_pass)) + ',' +
           (p.gradient_pass ? fmt(p.gradient_last_e) : "") + ',';
    out += std::string(tri(p.theorem1_pass)) + '\n';
  }
  return out;
}

std::string lemmas_csv(const std::vector<LemmaReport>& reports) {
  std::string out = "lemma,x,y,z,t,r,theta,resolved,lhs,rhs_unit,k_required,satisfied\n";
  for (const auto& rep : reports)
    for (const auto& s : rep.samples) {
      out += std::string(to_string(rep.lemma)) + ',' + fmt(s.z.x[0]) + ',' + fmt(s.z.x[1]) + ',' +
             fmt(s.z.x[2]) + ',' + fmt(s.z.t) + ',' + fmt(s.r) + ',' + fmt(s.theta) + ',' +
             (s.resolved ? "1" : "0") + ',';
      if (s.resolved)
        out += fmt(s.lhs) + ',' + fmt(s.rhs_unit) + ',' + fmt(s.k_required) + ',' +
               (s.satisfied ? "1" : "0");
      else
        out += ",,,";
      out += '\n';
    }
  return out;
}

std::string dimension_csv(const DimensionEstimate& d) {
  std::string out = "r,neg_log_r,count,log_count,ratio\n";
  for (std::size_t q = 0; q < d.scales.size(); ++q)
    out += fmt(d.scales[q]) + ',' + fmt(-std::log(d.scales[q])) + ',' +
           std::to_string(d.counts[q]) + ',' + fmt(std::log(static_cast<double>(d.counts[q]))) +
           ',' + fmt(d.ratios[q]) + '\n';
  return out;
}

std::string hausdorff_csv(const HausdorffEstimate& h) {
  std::string out = "delta,bound,cylinders,finest_radius\n";
  for (const auto& l : h.levels)
    out += fmt(l.delta) + ',' + fmt(l.measure_upper_bound) + ',' + std::to_string(l.cylinders) +
           ',' + fmt(l.finest_radius) + '\n';
  return out;
}

std::string points_csv(const std::vector<Point4>& pts) {
  std::string out = "x,y,z,t\n";
  for (const auto& p : pts)
    out += fmt(p[0]) + ',' + fmt(p[1]) + ',' + fmt(p[2]) + ',' + fmt(p[3]) + '\n';
  return out;
}

}  // namespace parreg::report
