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

#include <algorithm>
#include <cmath>

#include "parreg/error.hpp"
#include "parreg/functionals.hpp"

namespace parreg {

namespace {

// Smoothstep S on [0, 1] with S(0) = 0, S(1) = 1 and vanishing derivatives
// at both ends up to order 2 (C2) or 3 (C3).
double step(BumpOrder o, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (o == BumpOrder::C2) return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
  return x * x * x * x * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
}

double step_d1(BumpOrder o, double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double y = x * (1.0 - x);
  if (o == BumpOrder::C2) return 30.0 * y * y;
  return 140.0 * y * y * y;
}

double step_d2(BumpOrder o, double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double y = x * (1.0 - x);
  if (o == BumpOrder::C2) return 60.0 * y * (1.0 - 2.0 * x);
  return 420.0 * y * y * (1.0 - 2.0 * x);
}

}  // namespace

TestFunction::TestFunction(SpacetimePoint center, double rho, double q_out, double tau_out,
                           BumpOrder order)
    : center_(center), rho_(rho), q_out_(q_out), tau_out_(tau_out), order_(order) {
  if (!(rho > 0.0) || !std::isfinite(rho)) fail(ErrorCode::InvalidArgument, "rho must be positive");
  if (!(q_out > 1.0 && q_out < 2.0)) fail(ErrorCode::InvalidArgument, "q_out must lie in (1, 2)");
  if (!(tau_out > 1.0 && tau_out < 4.0))
    fail(ErrorCode::InvalidArgument, "tau_out must lie in (1, 4)");
}

TestFunction TestFunction::build(SpacetimePoint center, double rho, BumpOrder order) {
  for (int k = 0; k < 50; ++k) {
    TestFunction phi(center, rho, 1.99 - 0.01 * k, 3.99 - 0.04 * k, order);
    if (phi.sampled_derivative_bound() <= 10.0) return phi;
  }
  fail(ErrorCode::Numerical, "no cutoff profile satisfies the derivative bound");
}

double TestFunction::eta(double q) const { return 1.0 - step(order_, (q - 1.0) / (q_out_ - 1.0)); }

double TestFunction::eta_d1(double q) const {
  const double w = q_out_ - 1.0;
  return -step_d1(order_, (q - 1.0) / w) / w;
}

double TestFunction::eta_d2(double q) const {
  const double w = q_out_ - 1.0;
  return -step_d2(order_, (q - 1.0) / w) / (w * w);
}

double TestFunction::chi(double tau) const {
  return 1.0 - step(order_, (tau - 1.0) / (tau_out_ - 1.0));
}

double TestFunction::chi_d1(double tau) const {
  const double v = tau_out_ - 1.0;
  return -step_d1(order_, (tau - 1.0) / v) / v;
}

double TestFunction::value(const Vec3& offset, double s) const {
  const double q =
      std::sqrt(offset[0] * offset[0] + offset[1] * offset[1] + offset[2] * offset[2]) / rho_;
  return eta(q) * chi((center_.t - s) / (rho_ * rho_));
}

double TestFunction::sampled_derivative_bound(int samples) const {
  samples = std::max(samples, 3);
  std::vector<double> e(samples), e1(samples), hess(samples);
  for (int i = 0; i < samples; ++i) {
    const double q = 2.0 * i / (samples - 1);
    e[i] = eta(q);
    e1[i] = eta_d1(q);
    const double e2 = eta_d2(q);
    // Radial Hessian eigenvalues: eta'' once and eta'/q twice.
    const double tang = q > 0.0 ? e1[i] / q : 0.0;
    hess[i] = std::sqrt(e2 * e2 + 2.0 * tang * tang);
  }
  double worst = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double tau = -1.0 + 5.0 * j / (samples - 1);
    const double c = chi(tau);
    const double c1 = std::abs(chi_d1(tau));
    for (int i = 0; i < samples; ++i)
      worst = std::max(worst, e[i] * c1 + c * hess[i] + c * c * e1[i] * e1[i]);
  }
  return worst;
}

}  // namespace parreg
