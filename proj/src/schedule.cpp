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

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>

#include "parreg/error.hpp"
#include "parreg/lab.hpp"

namespace parreg {

namespace mp = boost::multiprecision;
using Rational = mp::cpp_rational;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void CriteriaConstants::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(eps1) || !positive(eps2) || !positive(zeta))
    fail(ErrorCode::Configuration, "eps1, eps2 and zeta must be positive");
  if (!(k1 > 1.0) || !(k2 > 1.0) || !std::isfinite(k1) || !std::isfinite(k2))
    fail(ErrorCode::Configuration, "k1 and k2 must exceed 1");
}

double k3_constant() { return 40.0 * std::pow(64.0 * std::numbers::pi, 0.4); }

double ParameterSchedule::theta(double rho) const { return std::pow(rho, beta); }

double ParameterSchedule::radius(int j, double rho) const {
  return std::pow(rho, alpha + j * beta);
}

std::vector<std::string> ParameterSchedule::violated_invariants() const {
  std::vector<std::string> v;
  const double limit = 10.0 / 63.0;
  const double b = 7.0 / 15.0 * (limit - gamma);
  if (!(gamma > 0.0 && gamma < limit)) v.push_back("gamma outside (0, 10/63)");
  if (n < 1) v.push_back("N < 1");
  if (!(beta < b)) v.push_back("beta >= (7/15)(10/63 - gamma)");
  if (n > 1 && 1.0 / (6.0 * (n - 1)) < b) v.push_back("N is not minimal");
  if (std::abs(beta * 6.0 * n - 1.0) > 1e-12) v.push_back("beta != 1/(6N)");
  if (std::abs(alpha - (550.0 - 9.0 * gamma) / 540.0) > 1e-15) v.push_back("alpha formula");
  if (!(alpha > 1.0)) v.push_back("alpha <= 1");
  if (!(log_rho0 < 0.0)) v.push_back("rho0 >= 1");
  if (!(beta * log_rho0 < -std::numbers::ln2)) v.push_back("rho0^beta >= 1/2");
  if (!(log_eps < log_eps_bound)) v.push_back("eps >= its bound");
  if (!(log_eps_bound <= 0.0)) v.push_back("eps bound > 1");
  if (!(log_eps < 0.0)) v.push_back("eps >= 1");
  // R_N < ... < R_0 < rho0 < 1 at rho = rho0 / 2 (log scale).
  const double lr = log_rho0 - std::numbers::ln2;
  double prev = alpha * lr;
  if (!(prev < log_rho0)) v.push_back("R_0 >= rho0");
  for (int j = 1; j <= std::min(n, 1000); ++j) {
    const double cur = (alpha + j * beta) * lr;
    if (!(cur < prev)) {
      v.push_back("R_j not decreasing");
      break;
    }
    prev = cur;
  }
  if (!(constants.k1 > 1.0 && constants.k2 > 1.0)) v.push_back("K1, K2 must exceed 1");
  if (!(constants.zeta > 0.0)) v.push_back("zeta must be positive");
  return v;
}

ParameterSchedule make_schedule(double gamma, const CriteriaConstants& constants,
                                double eps_fraction) {
  constants.validate();
  const double limit = 10.0 / 63.0;
  if (!(gamma > 0.0 && gamma < limit))
    fail(ErrorCode::Range, "gamma must lie in (0, 10/63), got " + fmt17(gamma));
  if (!(eps_fraction > 0.0 && eps_fraction < 1.0))
    fail(ErrorCode::Configuration, "eps fraction must lie in (0, 1)");
  const double b = 7.0 / 15.0 * (limit - gamma);
  const double guess = std::floor(1.0 / (6.0 * b)) + 1.0;
  if (!(guess < 1e8)) fail(ErrorCode::Range, "gamma too close to 10/63: N exceeds 1e8");
  int n = static_cast<int>(guess);
  while (!(1.0 / (6.0 * n) < b)) ++n;
  while (n > 1 && 1.0 / (6.0 * (n - 1)) < b) --n;

  ParameterSchedule s;
  s.gamma = gamma;
  s.n = n;
  s.beta = 1.0 / (6.0 * n);
  s.alpha = (550.0 - 9.0 * gamma) / 540.0;
  s.k3 = k3_constant();
  s.constants = constants;
  s.eps_fraction = eps_fraction;
  const double denom_log = n * std::log(constants.k2) +
                           std::log(s.k3 + 4.0 * constants.k1 * std::pow(s.k3, 1.5));
  s.log_eps_bound = std::min(0.0, 10.0 / 9.0 * (std::log(constants.zeta) - denom_log));
  s.eps_bound = std::exp(s.log_eps_bound);
  s.log_eps = std::log(eps_fraction) + s.log_eps_bound;
  s.eps = std::exp(s.log_eps);
  const double headroom = std::log(0.99);
  s.log_rho0 = std::min(-std::numbers::ln2 / s.beta + headroom, headroom);
  s.rho0 = std::exp(s.log_rho0);
  return s;
}

std::int64_t schedule_iterations(std::int64_t num, std::int64_t den) {
  if (den <= 0) fail(ErrorCode::InvalidArgument, "denominator must be positive");
  const mp::cpp_int p = num, q = den;
  const mp::cpp_int gap = 10 * q - 63 * p;  // (10 - 63 gamma) q
  if (p <= 0 || gap <= 0) fail(ErrorCode::Range, "gamma must lie in (0, 10/63)");
  // 1/(6N) < (10 - 63 gamma)/135  <=>  N > 45 q / (2 gap).
  const mp::cpp_int n = (45 * q) / (2 * gap) + 1;
  if (n > std::numeric_limits<std::int64_t>::max() / 2)
    fail(ErrorCode::Range, "N overflows");
  return static_cast<std::int64_t>(n);
}

namespace {

IdentityCheck exact_check(const std::string& name, const Rational& lhs, const Rational& rhs,
                          bool strict_less, bool need_positive) {
  IdentityCheck c;
  c.name = name;
  c.relation = strict_less ? "<" : "=";
  c.lhs = lhs.str();
  c.rhs = rhs.str();
  c.value = static_cast<double>(lhs);
  c.holds = strict_less ? lhs < rhs : lhs == rhs;
  c.positive = lhs > 0;
  c.positivity_required = need_positive;
  return c;
}

void finish(IdentityReport& r) {
  r.passed = true;
  for (const auto& c : r.checks)
    if (!c.holds || (c.positivity_required && !c.positive)) r.passed = false;
}

std::optional<std::pair<std::int64_t, std::int64_t>> parse_exact(const std::string& text) {
  auto digits = [](const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  std::string t = text;
  bool neg = false;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    neg = t[0] == '-';
    t = t.substr(1);
  }
  try {
    if (auto slash = t.find('/'); slash != std::string::npos) {
      const std::string a = t.substr(0, slash), b = t.substr(slash + 1);
      if (!digits(a) || !digits(b)) return std::nullopt;
      std::int64_t p = std::stoll(a), q = std::stoll(b);
      if (q == 0) return std::nullopt;
      return std::make_pair(neg ? -p : p, q);
    }
    const auto dot = t.find('.');
    const std::string whole = t.substr(0, dot);
    const std::string frac = dot == std::string::npos ? "" : t.substr(dot + 1);
    if (!(whole.empty() || digits(whole)) || !(frac.empty() || digits(frac))) return std::nullopt;
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (frac.size() > 17) return std::nullopt;
    std::int64_t q = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) q *= 10;
    const std::int64_t p = (whole.empty() ? 0 : std::stoll(whole)) * q +
                           (frac.empty() ? 0 : std::stoll(frac));
    return std::make_pair(neg ? -p : p, q);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// Smallest-denominator fraction (den <= 1e6) whose double equals x exactly.
std::optional<std::pair<std::int64_t, std::int64_t>> recover_fraction(double x) {
  if (!(x > 0.0 && x < 1.0)) return std::nullopt;
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double v = x;
  for (int it = 0; it < 40; ++it) {
    const double a = std::floor(v);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > 1000000) break;
    if (static_cast<double>(h2) / static_cast<double>(k2) == x) return std::make_pair(h2, k2);
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double frac = v - a;
    if (frac == 0.0) break;
    v = 1.0 / frac;
  }
  return std::nullopt;
}

IdentityReport floating_report(double gamma, const std::string& label) {
  IdentityReport r;
  r.gamma = label;
  r.exact = false;
  const ParameterSchedule s = make_schedule(gamma);
  r.n = s.n;
  r.beta = fmt17(s.beta);
  r.alpha = fmt17(s.alpha);
  const long double g = gamma, beta = s.beta, alpha = s.alpha, n = s.n;
  auto check = [&](const std::string& name, long double lhs, long double rhs, bool less,
                   bool pos) {
    IdentityCheck c;
    c.name = name;
    c.relation = less ? "<" : "=";
    c.lhs = fmt17(static_cast<double>(lhs));
    c.rhs = fmt17(static_cast<double>(rhs));
    c.value = static_cast<double>(lhs);
    c.holds = less ? lhs < rhs : std::fabs(static_cast<double>(lhs - rhs)) <= 1e-12;
    c.positive = lhs > 0;
    c.positivity_required = pos;
    r.checks.push_back(c);
  };
  const long double target2 = 2.0L / 9 - 3 * beta - 7 * g / 5;
  check("beta_constraint", beta, 7.0L / 15 * (10.0L / 63 - g), true, false);
  check("identity1", 1.5L - 1.5L * alpha + n * beta - 0.9L * g, (10 - 63 * g) / 72, false, true);
  check("identity2", target2, (10 - 63 * g) / 45 - 3 * beta, false, true);
  check("term2_branch_a", n * beta - 3 * beta + 2 - 1.5L * alpha - 57 * g / 40 - 2.5L * n * beta,
        target2, false, false);
  check("term2_branch_b", n * beta - 3 * beta - 3 + 3 * alpha - 27 * g / 20, target2, false, false);
  finish(r);
  return r;
}

}  // namespace

IdentityReport check_schedule_identities(std::int64_t num, std::int64_t den) {
  if (den <= 0) fail(ErrorCode::InvalidArgument, "denominator must be positive");
  IdentityReport r;
  const Rational g(num, den);
  r.gamma = g.str();
  r.n = schedule_iterations(num, den);
  const Rational n = r.n;
  const Rational beta = Rational(1) / (6 * n);
  const Rational alpha = (550 - 9 * g) / 540;
  r.beta = beta.str();
  r.alpha = alpha.str();
  const Rational three_half(3, 2);

  r.checks.push_back(exact_check("beta_constraint", beta, Rational(7, 15) * (Rational(10, 63) - g),
                                 true, false));
  r.checks.push_back(exact_check("identity1",
                                 three_half - three_half * alpha + n * beta - Rational(9, 10) * g,
                                 (10 - 63 * g) / 72, false, true));
  const Rational target2 = Rational(2, 9) - 3 * beta - Rational(7, 5) * g;
  r.checks.push_back(
      exact_check("identity2", target2, (10 - 63 * g) / 45 - 3 * beta, false, true));
  // Exponents after summing the geometric series, both branches.
  r.checks.push_back(exact_check("term2_branch_a",
                                 n * beta - 3 * beta + 2 - three_half * alpha -
                                     Rational(57, 40) * g - Rational(5, 2) * n * beta,
                                 target2, false, false));
  r.checks.push_back(exact_check("term2_branch_b",
                                 n * beta - 3 * beta - 3 + 3 * alpha - Rational(27, 20) * g,
                                 target2, false, false));
  // C(R_j) exponents from the A and E bounds, compared with their stated form.
  for (const Rational& j : {Rational(0), Rational(1), n}) {
    const Rational a_exp = -Rational(9, 10) * g;          // A(rho) <~ rho^{-9g/10}
    const Rational e_exp = Rational(2, 3) - g;            // E(rho) <~ rho^{2/3-g}
    const Rational scale = 1 - alpha - j * beta;          // log_rho (rho / R_j)
    const Rational first = three_half * scale + Rational(3, 4) * (a_exp + e_exp);
    const Rational second = -3 * scale + three_half * a_exp;
    const std::string tag = "_j" + j.str();
    r.checks.push_back(exact_check(
        "c_exponent_first" + tag, first,
        2 - three_half * alpha - three_half * beta * j - Rational(57, 40) * g, false, false));
    r.checks.push_back(exact_check("c_exponent_second" + tag, second,
                                   -3 + 3 * alpha + 3 * beta * j - Rational(27, 20) * g, false,
                                   false));
  }
  finish(r);
  return r;
}

IdentityReport check_schedule_identities(const std::string& gamma) {
  if (auto frac = parse_exact(gamma)) {
    IdentityReport r = check_schedule_identities(frac->first, frac->second);
    r.gamma = gamma;
    return r;
  }
  double g = 0.0;
  try {
    std::size_t used = 0;
    g = std::stod(gamma, &used);
    if (used != gamma.size()) throw std::invalid_argument(gamma);
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument, "cannot parse gamma '" + gamma + "'");
  }
  return floating_report(g, gamma);
}

IdentityReport check_schedule_identities(const ParameterSchedule& schedule) {
  if (auto frac = recover_fraction(schedule.gamma)) {
    IdentityReport r = check_schedule_identities(frac->first, frac->second);
    r.gamma = std::to_string(frac->first) + "/" + std::to_string(frac->second);
    return r;
  }
  return floating_report(schedule.gamma, fmt17(schedule.gamma));
}

}  // namespace parreg
