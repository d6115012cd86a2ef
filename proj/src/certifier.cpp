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

#include "parreg/certifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <thread>

#include "parreg/error.hpp"

namespace parreg {

namespace {

void require_cylinder_in_data(const Grid& g, const SpacetimePoint& z, double r) {
  const double tol = 1e-9 * g.dt;
  if (z.t - r * r < g.t0 - tol || z.t > g.t_end() + tol)
    fail(ErrorCode::Domain, "cylinder of radius " + std::to_string(r) +
                                " leaves the data time range");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool lex_less(const SpacetimePoint& a, const SpacetimePoint& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.t < b.t;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::RegularCertified: return "regular-certified";
    case Verdict::HypothesisFailed: return "hypothesis-failed";
    case Verdict::BoundChainFailed: return "bound-chain-failed";
  }
  return "unknown";
}

Eps1Result check_ckn_eps1(const FunctionalEngine& engine, const SpacetimePoint& z, double r,
                          double eps1) {
  if (!(eps1 > 0.0)) fail(ErrorCode::Configuration, "eps1 must be positive");
  require_cylinder_in_data(engine.field().grid(), z, r);
  const Integral q = engine.cylinder_integral({Density::U3, Density::P32}, z, r);
  Eps1Result res;
  res.value = q.value / (r * r);
  res.error = q.error / (r * r);
  res.passes = res.value < eps1;
  return res;
}

GradientReport check_gradient_criterion(const FunctionalEngine& engine, const SpacetimePoint& z,
                                        double r_min, double eps2, std::optional<double> r_max) {
  const Grid& g = engine.field().grid();
  if (!(eps2 > 0.0)) fail(ErrorCode::Configuration, "eps2 must be positive");
  if (!(r_min >= 2.0 * g.h_max()))
    fail(ErrorCode::Resolution, "r_min " + fmt(r_min) + " is below 2h = " + fmt(2.0 * g.h_max()));
  double top = r_max.value_or(
      std::min(0.49 * g.min_side(), std::sqrt(std::max(0.0, z.t - g.t0))));
  GradientReport rep;
  for (double r = top; r >= r_min; r *= 0.5) {
    const Integral q = engine.cylinder_integral({Density::GradU2}, z, r);
    rep.ladder.push_back({r, q.value / r, q.error / r});
  }
  if (rep.ladder.empty()) fail(ErrorCode::Geometry, "gradient ladder is empty");
  rep.passes = rep.ladder.back().e < eps2;
  rep.non_increasing = true;
  for (std::size_t k = 1; k < rep.ladder.size(); ++k)
    if (rep.ladder[k].e > rep.ladder[k - 1].e + rep.ladder[k].error + rep.ladder[k - 1].error)
      rep.non_increasing = false;
  return rep;
}

double minimal_certifiable_rho(const ParameterSchedule& s, double h) {
  return std::pow(2.0 * h, 1.0 / (s.alpha + s.n * s.beta));
}

CertificateReport certify_theorem1(const FunctionalEngine& engine, const SpacetimePoint& z,
                                   double rho, const ParameterSchedule& s, TimeWindowMode mode) {
  const Grid& g = engine.field().grid();
  if (!(rho > 0.0 && rho < 1.0)) fail(ErrorCode::Range, "rho must lie in (0, 1)");
  const double h = g.h_max();
  if (s.radius(s.n, rho) < 2.0 * h)
    fail(ErrorCode::Resolution, "R_N = " + fmt(s.radius(s.n, rho)) + " is below 2h; smallest usable rho is " +
                                    fmt(minimal_certifiable_rho(s, h)));
  require_cylinder_in_data(g, z, 2.0 * rho);

  CertificateReport rep;
  rep.z = z;
  rep.rho = rho;
  rep.schedule = s;
  rep.theta = s.theta(rho);
  rep.rho_below_rho0 = std::log(rho) < s.log_rho0;
  rep.theta_below_half = rep.theta < 0.5;
  const double k1 = s.constants.k1, k2 = s.constants.k2, k3 = s.k3;

  const Integral hyp = engine.theorem1_lhs(z, 2.0 * rho);
  rep.hypothesis_lhs = hyp.value;
  rep.hypothesis_error = hyp.error;
  rep.hypothesis_rhs = std::exp((5.0 / 3.0 - s.gamma) * std::log(2.0 * rho) + s.log_eps);
  double rel_err = hyp.value > 0.0 ? hyp.error / hyp.value : 0.0;

  const Integral a = engine.ball_sup({Density::U2}, z, rho, mode);
  const Integral e = engine.cylinder_integral({Density::GradU2}, z, rho);
  rep.step1_a_actual = a.value / rho;
  rep.step1_e_actual = e.value / rho;
  rep.step1_a_bound = k3 * std::exp(-0.9 * s.gamma * std::log(rho) + 0.6 * s.log_eps);
  rep.step1_e_bound =
      std::pow(2.0, 5.0 / 3.0) * std::exp((2.0 / 3.0 - s.gamma) * std::log(rho) + s.log_eps);

  std::vector<double> c_err(s.n + 1), d_err(s.n + 1);
  for (int j = 0; j <= s.n; ++j) {
    const double r = s.radius(j, rho);
    rep.radii.push_back(r);
    const Integral c = engine.cylinder_integral({Density::U3}, z, r);
    const Integral d = engine.cylinder_integral({Density::P32}, z, r);
    rep.c_values.push_back(c.value / (r * r));
    rep.d_values.push_back(d.value / (r * r));
    c_err[j] = c.error / (r * r);
    d_err[j] = d.error / (r * r);
    if (c.value > 0.0) rel_err = std::max(rel_err, c.error / c.value);
    if (d.value > 0.0) rel_err = std::max(rel_err, d.error / d.value);
  }
  rep.quadrature_error = rel_err;
  const double kt = k2 * rep.theta;
  rep.term_i = std::pow(kt, s.n) * rep.d_values[0];
  double term_ii_err = 0.0;
  for (int j = 0; j <= s.n; ++j) {
    const double w = std::pow(kt, s.n - j) / (rep.theta * rep.theta * rep.theta);
    rep.term_ii += w * rep.c_values[j];
    term_ii_err += w * c_err[j];
  }
  const double log_k2n = s.n * std::log(k2);
  rep.term_i_bound = std::exp(log_k2n + std::log(k3) + 0.9 * s.log_eps);
  rep.term_ii_bound = std::exp(log_k2n + std::log(4.0 * k1) + 1.5 * std::log(k3) + 0.9 * s.log_eps);
  rep.final_dc = rep.d_values[s.n] + rep.c_values[s.n];
  rep.final_dc_bound = rep.term_i_bound + rep.term_ii_bound;

  const bool hypothesis = rep.hypothesis_lhs < rep.hypothesis_rhs;
  if (hypothesis) {
    auto link = [&](bool ok, const std::string& name) {
      if (!ok) rep.failed_links.push_back(name);
    };
    link(rep.step1_a_actual <= rep.step1_a_bound + a.error / rho, "step1_A");
    link(rep.step1_e_actual <= rep.step1_e_bound + e.error / rho, "step1_E");
    link(rep.final_dc <= rep.term_i + rep.term_ii + d_err[s.n] + c_err[s.n] + term_ii_err,
         "pressure_iteration");
    link(rep.term_i <= rep.term_i_bound + std::pow(kt, s.n) * d_err[0], "term_I");
    link(rep.term_ii <= rep.term_ii_bound + term_ii_err, "term_II");
    link(rep.final_dc <= s.constants.zeta, "final_DC_le_zeta");
  }

  if (!hypothesis) {
    rep.verdict = Verdict::HypothesisFailed;
    rep.detail = "integral over Q(z,2rho) = " + fmt(rep.hypothesis_lhs) + " >= " +
                 fmt(rep.hypothesis_rhs);
  } else if (rep.final_dc <= s.constants.zeta) {
    rep.verdict = Verdict::RegularCertified;
    rep.detail = rep.failed_links.empty() ? "all bound-chain links hold"
                                          : "certified by final_DC; failed links:";
    for (const auto& l : rep.failed_links) rep.detail += " " + l;
  } else {
    rep.verdict = Verdict::BoundChainFailed;
    rep.detail = "final_DC = " + fmt(rep.final_dc) + " > zeta; failed links:";
    for (const auto& l : rep.failed_links) rep.detail += " " + l;
  }
  return rep;
}

namespace {

ScanPoint scan_one(const FunctionalEngine& engine, const SpacetimePoint& z, const ScanCriteria& c,
                   const std::optional<ParameterSchedule>& schedule) {
  const Grid& g = engine.field().grid();
  const double floor_r = 2.0 * g.h_max();
  ScanPoint sp;
  sp.z = z;
  auto recoverable = [](const Error& e) {
    return e.code() == ErrorCode::Domain || e.code() == ErrorCode::Geometry ||
           e.code() == ErrorCode::Resolution || e.code() == ErrorCode::Range;
  };
  if (c.eps1) {
    bool any = false, pass = false;
    double best = std::numeric_limits<double>::infinity();
    for (double r : c.radii) {
      if (r < floor_r) continue;
      try {
        const auto res = check_ckn_eps1(engine, z, r, c.constants.eps1);
        any = true;
        ++sp.radii_tested;
        best = std::min(best, res.value);
        pass = pass || res.passes;
      } catch (const Error& e) {
        if (!recoverable(e)) throw;
        sp.note += std::string(" eps1@") + fmt(r) + ":" + to_string(e.code());
      }
    }
    if (any) {
      sp.eps1_pass = pass;
      sp.eps1_min_value = best;
    }
  }
  if (c.gradient) {
    try {
      const double rmin = c.gradient_r_min > 0.0 ? c.gradient_r_min : floor_r;
      const auto rep = check_gradient_criterion(engine, z, rmin, c.constants.eps2);
      sp.gradient_pass = rep.passes;
      sp.gradient_last_e = rep.ladder.back().e;
    } catch (const Error& e) {
      if (!recoverable(e)) throw;
      sp.note += std::string(" gradient:") + to_string(e.code());
    }
  }
  if (c.theorem1 && schedule) {
    bool any = false, pass = false;
    for (double rho : c.radii) {
      try {
        const auto rep = certify_theorem1(engine, z, rho, *schedule, c.mode);
        any = true;
        pass = pass || rep.verdict == Verdict::RegularCertified;
      } catch (const Error& e) {
        if (!recoverable(e)) throw;
        sp.note += std::string(" theorem1@") + fmt(rho) + ":" + to_string(e.code());
      }
    }
    if (any) sp.theorem1_pass = pass;
  }
  const bool evaluated =
      sp.eps1_pass.has_value() || sp.gradient_pass.has_value() || sp.theorem1_pass.has_value();
  if (!sp.note.empty() && sp.note.front() == ' ') sp.note.erase(0, 1);
  if (!evaluated) {
    sp.skipped = true;
    return sp;
  }
  sp.candidate = !(sp.eps1_pass.value_or(false) || sp.gradient_pass.value_or(false) ||
                   sp.theorem1_pass.value_or(false));
  return sp;
}

}  // namespace

ScanReport scan_candidates(const FunctionalEngine& engine, const std::vector<SpacetimePoint>& points,
                           const ScanCriteria& criteria) {
  if (!criteria.eps1 && !criteria.gradient && !criteria.theorem1)
    fail(ErrorCode::Configuration, "scan needs at least one criterion");
  if ((criteria.eps1 || criteria.theorem1) && criteria.radii.empty())
    fail(ErrorCode::Configuration, "scan needs at least one radius");
  criteria.constants.validate();
  std::optional<ParameterSchedule> schedule;
  if (criteria.theorem1) schedule = make_schedule(criteria.gamma, criteria.constants);

  std::vector<SpacetimePoint> order = points;
  std::sort(order.begin(), order.end(), lex_less);
  std::vector<ScanPoint> out(order.size());
  const int threads = std::max(1, criteria.threads);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= order.size()) return;
      try {
        out[i] = scan_one(engine, order[i], criteria, schedule);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ScanReport rep;
  rep.points = std::move(out);
  for (const auto& p : rep.points) {
    if (p.skipped) ++rep.skipped;
    if (p.candidate) rep.candidates.push_back(p.z);
  }
  return rep;
}

}  // namespace parreg
