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

#include <array>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "parreg/field.hpp"

namespace parreg {

// ---------------------------------------------------------------------------
// Ball and time quadrature

/// Volume fraction of the unit cube below the plane m.u = alpha, with
/// m_i >= 0 and m1 + m2 + m3 = 1.
double cube_plane_fraction(double m1, double m2, double m3, double alpha);

/// Fraction of the cell [-h/2, h/2] (per axis) centered at `offset` from the
/// ball center that lies inside the ball of radius r. The sphere is replaced
/// by its tangent plane across the cell.
double cell_ball_fraction(const Vec3& offset, const Vec3& h, double r);

struct BallWeight {
  std::size_t index;  // flat spatial index
  double weight;      // covered volume
};

/// PlaneCut weights boundary cells by the tangent-plane cut; CellCenter counts
/// a whole cell when its center lies strictly inside the ball, so disjoint
/// balls never share weight.
enum class BallRule { PlaneCut, CellCenter };

/// Quadrature weights of B(center, r) on the periodic grid. Throws Geometry
/// when 2r >= min side.
std::vector<BallWeight> ball_stencil(const Grid& grid, const Vec3& center, double r,
                                     BallRule rule = BallRule::PlaneCut);

struct TimeWeight {
  int n;
  double weight;
};

/// Weights w_n with sum w_n g_n = integral over [a, b] of the piecewise-linear
/// interpolant of g through the samples. [a, b] must lie inside the data.
std::vector<TimeWeight> time_weights(const Grid& grid, double a, double b);

// ---------------------------------------------------------------------------
// Scaled functionals

enum class TimeWindowMode { PaperLiteral, Cylinder };

const char* to_string(TimeWindowMode mode);
TimeWindowMode parse_time_window_mode(const std::string& name);

struct FunctionalValues {
  SpacetimePoint z;
  double r = 0.0;
  double a = 0.0, e = 0.0, c = 0.0, d = 0.0;
  /// Per-functional error estimates and their maximum.
  double err_a = 0.0, err_e = 0.0, err_c = 0.0, err_d = 0.0;
  double estimated_quadrature_error = 0.0;
};

/// Pointwise integrands, cached per engine.
enum class Density {
  U2,      // |U|^2
  GradU2,  // |grad U|^2
  U3,      // |U|^3
  P32,     // |P|^{3/2}
  U103,    // |U|^{10/3}
  P53,     // |P|^{5/3}
  B2,
  GradB2,
  B3,
  B103,
};
inline constexpr int kDensityCount = 10;

/// Result of integrating a density sum over a cylinder, with its estimated
/// absolute quadrature error.
struct Integral {
  double value = 0.0;
  double error = 0.0;
};

class TestFunction;

/// Functional evaluation on one field. Densities are computed lazily and
/// shared by all queries; every method is safe to call concurrently.
class FunctionalEngine {
 public:
  explicit FunctionalEngine(const SpaceTimeField& field);
  ~FunctionalEngine();
  FunctionalEngine(const FunctionalEngine&) = delete;
  FunctionalEngine& operator=(const FunctionalEngine&) = delete;

  const SpaceTimeField& field() const { return field_; }

  /// Density over all samples, shape (nt, nx, ny, nz).
  std::span<const double> density(Density d) const;

  /// Integral over Q(z, r) = B(x, r) x (t - r^2, t), clipped to the data.
  Integral cylinder_integral(std::initializer_list<Density> terms, const SpacetimePoint& z,
                             double r, BallRule rule = BallRule::PlaneCut) const;
  /// sup over the A-window of the ball integral.
  Integral ball_sup(std::initializer_list<Density> terms, const SpacetimePoint& z, double r,
                    TimeWindowMode mode) const;
  /// Integral over the whole data domain (time trapezoid).
  double domain_integral(std::initializer_list<Density> terms) const;

  double A(const SpacetimePoint& z, double r,
           TimeWindowMode mode = TimeWindowMode::PaperLiteral) const;
  double E(const SpacetimePoint& z, double r) const;
  double C(const SpacetimePoint& z, double r) const;
  double D(const SpacetimePoint& z, double r) const;

  FunctionalValues evaluate(const SpacetimePoint& z, double r,
                            TimeWindowMode mode = TimeWindowMode::PaperLiteral) const;
  /// Magnetic variant; Configuration error when the field has no B.
  FunctionalValues evaluate_mhd(const SpacetimePoint& z, double r,
                                TimeWindowMode mode = TimeWindowMode::PaperLiteral) const;

  /// Integral over Q(z, rho) of |grad U|^2 + |U|^{10/3} + |P|^{5/3}, plus
  /// |grad B|^2 + |B|^{10/3} when the field carries B.
  Integral theorem1_lhs(const SpacetimePoint& z, double rho) const;
  /// The same integrand over the whole data domain.
  double theorem1_domain_integral() const;

  /// LHS - RHS of the local energy inequality at stored time t (magnetic
  /// form when B is present).
  double energy_residual(const TestFunction& phi, double t) const;

 private:
  struct Cache;
  const SpaceTimeField& field_;
  std::unique_ptr<Cache> cache_;
};

/// Relative spatial quadrature error constant: err ~ kappa (h/r)^2 |F|.
inline constexpr double kBallQuadratureKappa = 0.5;

double eval_A(const SpaceTimeField& f, const SpacetimePoint& z, double r,
              TimeWindowMode mode = TimeWindowMode::PaperLiteral);
double eval_E(const SpaceTimeField& f, const SpacetimePoint& z, double r);
double eval_C(const SpaceTimeField& f, const SpacetimePoint& z, double r);
double eval_D(const SpaceTimeField& f, const SpacetimePoint& z, double r);
double eval_theorem1_lhs(const SpaceTimeField& f, const SpacetimePoint& z, double rho);

// ---------------------------------------------------------------------------
// Cutoff test function

enum class BumpOrder { C2, C3 };

/// phi(y, s) = eta(|y - x| / rho) * chi((t - s) / rho^2). eta is 1 on [0, 1]
/// and vanishes beyond q_out < 2; chi is 1 for tau <= 1 and vanishes beyond
/// tau_out < 4.
class TestFunction {
 public:
  TestFunction(SpacetimePoint center, double rho, double q_out, double tau_out,
               BumpOrder order = BumpOrder::C2);

  /// Widest profile passing the sampled derivative bound; throws Numerical
  /// when no candidate does.
  static TestFunction build(SpacetimePoint center, double rho,
                            BumpOrder order = BumpOrder::C2);

  const SpacetimePoint& center() const { return center_; }
  double rho() const { return rho_; }
  double q_out() const { return q_out_; }
  double tau_out() const { return tau_out_; }
  BumpOrder order() const { return order_; }
  double spatial_radius() const { return q_out_ * rho_; }
  double support_start() const { return center_.t - tau_out_ * rho_ * rho_; }

  // Radial and temporal profiles in scaled variables q = |y-x|/rho and
  // tau = (t - s)/rho^2.
  double eta(double q) const;
  double eta_d1(double q) const;
  double eta_d2(double q) const;
  double chi(double tau) const;
  double chi_d1(double tau) const;

  double value(const Vec3& offset, double s) const;

  /// max over a dense (q, tau) lattice of
  /// rho^2 (|d_t phi| + |Hess phi|_F + |grad phi|^2).
  double sampled_derivative_bound(int samples = 1001) const;

 private:
  SpacetimePoint center_;
  double rho_, q_out_, tau_out_;
  BumpOrder order_;
};

}  // namespace parreg
