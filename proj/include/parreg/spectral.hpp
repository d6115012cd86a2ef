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

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parreg/field.hpp"

namespace parreg {

using Complex = std::complex<double>;

/// Real-to-complex 3D transform pair on an nx*ny*nz periodic grid. The
/// spectral array has shape nx*ny*(nz/2+1). inverse() is normalized so that
/// inverse(forward(f)) == f.
class Fft3 {
 public:
  Fft3(int nx, int ny, int nz);
  ~Fft3();
  Fft3(const Fft3&) = delete;
  Fft3& operator=(const Fft3&) = delete;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  int nzc() const { return nz_ / 2 + 1; }
  std::size_t real_size() const { return static_cast<std::size_t>(nx_) * ny_ * nz_; }
  std::size_t spectral_size() const {
    return static_cast<std::size_t>(nx_) * ny_ * nzc();
  }

  void forward(std::span<const double> in, std::span<Complex> out) const;
  void inverse(std::span<const Complex> in, std::span<double> out) const;

 private:
  struct Plans;
  int nx_, ny_, nz_;
  std::unique_ptr<Plans> plans_;
};

/// Spectral differentiation, projection and pressure recovery on one spatial
/// grid. Nyquist modes are dropped by every derivative.
class SpectralOps {
 public:
  SpectralOps(int nx, int ny, int nz, double lx, double ly, double lz);

  const Fft3& fft() const { return fft_; }
  std::size_t real_size() const { return fft_.real_size(); }
  std::size_t spectral_size() const { return fft_.spectral_size(); }

  /// Wavevector of spectral entry (i, j, k); zero on Nyquist indices.
  void wavevector(int i, int j, int k, double out[3]) const;
  /// Integer mode numbers (signed) of spectral entry (i, j, k).
  void modes(int i, int j, int k, int out[3]) const;
  bool is_nyquist(int i, int j, int k) const;
  /// True when every |mode| <= fraction * n/2 and no index is Nyquist.
  bool keep_mode(int i, int j, int k, double dealias_fraction) const;

  /// d f / d x_axis for one scalar slice.
  std::vector<double> derivative(std::span<const double> f, int axis) const;
  /// Gradient tensor of a 3-component slice: out[3*c + axis] = d u_c / d x_axis.
  std::vector<std::vector<double>> gradient_tensor(std::span<const double> u3) const;
  /// Pointwise |grad u|^2 (Frobenius) of a 3-component slice.
  std::vector<double> gradient_norm_sq(std::span<const double> u3) const;
  std::vector<double> divergence(std::span<const double> u3) const;
  std::vector<double> laplacian(std::span<const double> f) const;

  /// Solves -Lap P = div((U.grad)U) with zero-mean P. The quadratic product is
  /// formed on a 3/2-padded grid, so it is alias-free for band-limited U.
  std::vector<double> recover_pressure(std::span<const double> u3) const;

  /// Leray projection of a 3-component slice in physical space.
  std::vector<double> project(std::span<const double> u3) const;

 private:
  int nx_, ny_, nz_;
  double lx_, ly_, lz_;
  Fft3 fft_;
};

/// Trigonometric interpolation of a periodic nx*ny*nz slice onto mx*my*mz
/// samples of the same period.
std::vector<double> resample_periodic(std::span<const double> f, int nx, int ny,
                                      int nz, int mx, int my, int mz);

// ---------------------------------------------------------------------------
// Pseudo-spectral integrator

struct InitialCondition {
  enum class Kind { Beltrami, RandomSolenoidal, FromFile };
  Kind kind = Kind::Beltrami;
  double a = 1.0, b = 1.0, c = 1.0;          // Beltrami amplitudes
  std::uint64_t seed = 0;                    // RandomSolenoidal
  double energy_spectrum_slope = -5.0 / 3.0;  // E(k) ~ k^slope
  double rms_velocity = 1.0;
  std::string path;  // FromFile: NSST v1 directory; sample 0 is used
};

struct SolverConfig {
  int nx = 32, ny = 32, nz = 32;
  double lx = 2.0 * 3.14159265358979323846;
  double ly = 2.0 * 3.14159265358979323846;
  double lz = 2.0 * 3.14159265358979323846;
  double t0 = 0.0;
  double t_end = 1.0;
  double cfl_safety = 0.5;
  double dealias = 2.0 / 3.0;
  int output_stride = 1;
  /// Upper bound on the step; the CFL step is used when it is smaller.
  std::optional<double> max_dt;
  InitialCondition initial;

  void validate() const;
};

struct SolverDiagnostics {
  double dt = 0.0;
  int steps = 0;
  double max_cfl = 0.0;
  /// Kinetic energy (1/2) int |U|^2 after every step, index 0 = initial.
  std::vector<double> energy;
};

/// Explicit RK4 with an exact viscous integrating factor, 2/3-rule
/// dealiasing of the rotational nonlinear term and Leray projection.
SpaceTimeField solve(const SolverConfig& config,
                     SolverDiagnostics* diagnostics = nullptr);

/// Largest stable RK4 step for the given max|U| (advective bound), scaled by
/// cfl_safety.
double stable_time_step(const SolverConfig& config, double max_velocity);

}  // namespace parreg
