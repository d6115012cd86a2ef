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
#include <numbers>
#include <random>

#include "parreg/error.hpp"
#include "parreg/nsst_io.hpp"
#include "parreg/spectral.hpp"

namespace parreg {

namespace {

// RK4 stability limit on the imaginary axis.
const double kRk4ImagLimit = 2.0 * std::numbers::sqrt2;

using SpecVec = std::array<std::vector<Complex>, 3>;

struct ModeTables {
  std::vector<std::array<double, 3>> k;
  std::vector<double> k2;
  std::vector<unsigned char> keep;
};

ModeTables build_tables(const SpectralOps& ops, int nx, int ny, int nz, double dealias) {
  const int nzc = nz / 2 + 1;
  ModeTables t;
  const std::size_t n = ops.spectral_size();
  t.k.resize(n);
  t.k2.resize(n);
  t.keep.resize(n);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nzc; ++k) {
        const std::size_t q = (static_cast<std::size_t>(i) * ny + j) * nzc + k;
        double kv[3];
        ops.wavevector(i, j, k, kv);
        t.k[q] = {kv[0], kv[1], kv[2]};
        t.k2[q] = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
        t.keep[q] = ops.keep_mode(i, j, k, dealias) ? 1 : 0;
      }
  return t;
}

double max_wavenumber(const SolverConfig& c) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto axis = [&](int n, double l) {
    return two_pi / l * std::floor(c.dealias * 0.5 * n);
  };
  const double kx = axis(c.nx, c.lx), ky = axis(c.ny, c.ly), kz = axis(c.nz, c.lz);
  return std::sqrt(kx * kx + ky * ky + kz * kz);
}

class Integrator {
 public:
  explicit Integrator(const SolverConfig& c)
      : c_(c),
        ops_(c.nx, c.ny, c.nz, c.lx, c.ly, c.lz),
        tab_(build_tables(ops_, c.nx, c.ny, c.nz, c.dealias)),
        s_(ops_.real_size()),
        m_(ops_.spectral_size()) {}

  const SpectralOps& ops() const { return ops_; }
  std::size_t real_size() const { return s_; }

  SpecVec to_spectral(std::span<const double> u3) const {
    SpecVec out;
    for (int c = 0; c < 3; ++c) {
      out[c].resize(m_);
      ops_.fft().forward(u3.subspan(c * s_, s_), out[c]);
    }
    return out;
  }

  std::vector<double> to_physical(const SpecVec& uh) const {
    std::vector<double> u(3 * s_);
    for (int c = 0; c < 3; ++c)
      ops_.fft().inverse(uh[c], std::span<double>(u).subspan(c * s_, s_));
    return u;
  }

  /// Zeroes modes outside the dealiasing window, then Leray-projects.
  void mask_and_project(SpecVec& v) const {
    for (std::size_t q = 0; q < m_; ++q) {
      if (!tab_.keep[q] || tab_.k2[q] == 0.0) {
        if (!tab_.keep[q] || q != 0)
          for (int c = 0; c < 3; ++c) v[c][q] = 0.0;
        continue;
      }
      const auto& k = tab_.k[q];
      const Complex kd = k[0] * v[0][q] + k[1] * v[1][q] + k[2] * v[2][q];
      for (int c = 0; c < 3; ++c) v[c][q] -= k[c] * kd / tab_.k2[q];
    }
  }

  /// P(U x curl U), dealiased. The gradient part of the advection term is
  /// removed by the projection, so this equals -P((U.grad)U).
  SpecVec nonlinear(const SpecVec& uh) const {
    SpecVec wh;
    for (int c = 0; c < 3; ++c) wh[c].resize(m_);
    for (std::size_t q = 0; q < m_; ++q) {
      const auto& k = tab_.k[q];
      const Complex I(0.0, 1.0);
      wh[0][q] = I * (k[1] * uh[2][q] - k[2] * uh[1][q]);
      wh[1][q] = I * (k[2] * uh[0][q] - k[0] * uh[2][q]);
      wh[2][q] = I * (k[0] * uh[1][q] - k[1] * uh[0][q]);
    }
    const auto u = to_physical(uh);
    const auto w = to_physical(wh);
    std::vector<double> cross(3 * s_);
    for (std::size_t q = 0; q < s_; ++q) {
      const double u0 = u[q], u1 = u[s_ + q], u2 = u[2 * s_ + q];
      const double w0 = w[q], w1 = w[s_ + q], w2 = w[2 * s_ + q];
      cross[q] = u1 * w2 - u2 * w1;
      cross[s_ + q] = u2 * w0 - u0 * w2;
      cross[2 * s_ + q] = u0 * w1 - u1 * w0;
    }
    auto nh = to_spectral(cross);
    mask_and_project(nh);
    return nh;
  }

  /// One integrating-factor RK4 step of size dt.
  void step(SpecVec& u, double dt) const {
    std::vector<double> eh(m_), ef(m_);
    for (std::size_t q = 0; q < m_; ++q) {
      eh[q] = std::exp(-tab_.k2[q] * 0.5 * dt);
      ef[q] = eh[q] * eh[q];
    }
    auto combine = [&](auto&& fn) {
      SpecVec out;
      for (int c = 0; c < 3; ++c) {
        out[c].resize(m_);
        for (std::size_t q = 0; q < m_; ++q) out[c][q] = fn(c, q);
      }
      return out;
    };
    const SpecVec k1 = nonlinear(u);
    const SpecVec a = combine([&](int c, std::size_t q) {
      return eh[q] * (u[c][q] + 0.5 * dt * k1[c][q]);
    });
    const SpecVec k2 = nonlinear(a);
    const SpecVec b = combine([&](int c, std::size_t q) {
      return eh[q] * u[c][q] + 0.5 * dt * k2[c][q];
    });
    const SpecVec k3 = nonlinear(b);
    const SpecVec d = combine([&](int c, std::size_t q) {
      return ef[q] * u[c][q] + dt * eh[q] * k3[c][q];
    });
    const SpecVec k4 = nonlinear(d);
    for (int c = 0; c < 3; ++c)
      for (std::size_t q = 0; q < m_; ++q)
        u[c][q] = ef[q] * u[c][q] +
                  dt / 6.0 *
                      (ef[q] * k1[c][q] + 2.0 * eh[q] * (k2[c][q] + k3[c][q]) + k4[c][q]);
  }

 private:
  const SolverConfig& c_;
  SpectralOps ops_;
  ModeTables tab_;
  std::size_t s_, m_;
};

double kinetic_energy(std::span<const double> u3, double cell_volume) {
  double sum = 0.0;
  for (double v : u3) sum += v * v;
  return 0.5 * sum * cell_volume;
}

double max_speed(std::span<const double> u3, std::size_t s) {
  double m = 0.0;
  for (std::size_t q = 0; q < s; ++q) {
    const double v = u3[q] * u3[q] + u3[s + q] * u3[s + q] + u3[2 * s + q] * u3[2 * s + q];
    m = std::max(m, v);
  }
  return std::sqrt(m);
}

std::vector<double> random_solenoidal(const SolverConfig& c, const Integrator& in) {
  const SpectralOps& ops = in.ops();
  const int nzc = c.nz / 2 + 1;
  std::mt19937_64 rng(c.initial.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpecVec uh;
  for (int d = 0; d < 3; ++d) uh[d].assign(ops.spectral_size(), Complex(0.0, 0.0));
  for (int i = 0; i < c.nx; ++i)
    for (int j = 0; j < c.ny; ++j)
      for (int k = 0; k < nzc; ++k) {
        const std::size_t q = (static_cast<std::size_t>(i) * c.ny + j) * nzc + k;
        // Draw for every mode so the stream does not depend on the mask.
        Complex draw[3];
        for (auto& z : draw) {
          const double re = gauss(rng);
          const double im = gauss(rng);
          z = Complex(re, im);
        }
        if (!ops.keep_mode(i, j, k, c.dealias)) continue;
        double kv[3];
        ops.wavevector(i, j, k, kv);
        const double kk = std::sqrt(kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]);
        if (kk == 0.0) continue;
        // Shell energy E(k) ~ k^slope spread over ~k^2 modes.
        const double amp = std::sqrt(std::pow(kk, c.initial.energy_spectrum_slope) / (kk * kk));
        for (int d = 0; d < 3; ++d) uh[d][q] = amp * draw[d];
      }
  in.mask_and_project(uh);
  // c2r then r2c restores Hermitian symmetry on the k=0 and Nyquist planes.
  auto u = in.to_physical(uh);
  uh = in.to_spectral(u);
  in.mask_and_project(uh);
  u = in.to_physical(uh);
  const std::size_t s = in.real_size();
  double sum = 0.0;
  for (double v : u) sum += v * v;
  const double rms = std::sqrt(sum / static_cast<double>(s));
  if (rms == 0.0) fail(ErrorCode::Configuration, "random initial condition has no resolved modes");
  const double scale = c.initial.rms_velocity / rms;
  for (double& v : u) v *= scale;
  return u;
}

std::vector<double> initial_velocity(const SolverConfig& c, const Integrator& in) {
  Grid g;
  g.nx = c.nx;
  g.ny = c.ny;
  g.nz = c.nz;
  g.lx = c.lx;
  g.ly = c.ly;
  g.lz = c.lz;
  g.nt = 2;
  g.t0 = c.t0;
  g.dt = 1.0;
  switch (c.initial.kind) {
    case InitialCondition::Kind::Beltrami: {
      auto f = generate_beltrami(g, c.initial.a, c.initial.b, c.initial.c);
      auto s = f.u_slice(0);
      return {s.begin(), s.end()};
    }
    case InitialCondition::Kind::RandomSolenoidal:
      return random_solenoidal(c, in);
    case InitialCondition::Kind::FromFile: {
      auto f = load(c.initial.path);
      const Grid& fg = f.grid();
      if (fg.nx != c.nx || fg.ny != c.ny || fg.nz != c.nz || fg.lx != c.lx || fg.ly != c.ly ||
          fg.lz != c.lz)
        fail(ErrorCode::Configuration, "initial-condition file grid does not match config");
      auto s = f.u_slice(0);
      return {s.begin(), s.end()};
    }
  }
  fail(ErrorCode::Internal, "unknown initial condition");
}

}  // namespace

void SolverConfig::validate() const {
  if (nx < 4 || ny < 4 || nz < 4) fail(ErrorCode::Configuration, "grid counts must be >= 4");
  if (!(lx > 0.0 && ly > 0.0 && lz > 0.0) || !std::isfinite(lx * ly * lz))
    fail(ErrorCode::Configuration, "box lengths must be positive");
  if (!std::isfinite(t0) || !std::isfinite(t_end) || !(t_end > t0))
    fail(ErrorCode::Configuration, "t_end must exceed t0");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
    fail(ErrorCode::Configuration, "cfl_safety must lie in (0, 1]");
  if (!(dealias > 0.0 && dealias <= 1.0))
    fail(ErrorCode::Configuration, "dealias must lie in (0, 1]");
  if (output_stride < 1) fail(ErrorCode::Configuration, "output_stride must be >= 1");
  if (max_dt && !(*max_dt > 0.0)) fail(ErrorCode::Configuration, "max_dt must be positive");
  if (initial.kind == InitialCondition::Kind::RandomSolenoidal &&
      !(initial.rms_velocity >= 0.0 && std::isfinite(initial.energy_spectrum_slope)))
    fail(ErrorCode::Configuration, "invalid random initial-condition parameters");
  if (initial.kind == InitialCondition::Kind::FromFile && initial.path.empty())
    fail(ErrorCode::Configuration, "from_file initial condition needs a path");
}

double stable_time_step(const SolverConfig& config, double max_velocity) {
  const double horizon = config.t_end - config.t0;
  double dt = horizon;
  if (max_velocity > 0.0)
    dt = config.cfl_safety * kRk4ImagLimit / (max_velocity * max_wavenumber(config));
  if (config.max_dt) dt = std::min(dt, *config.max_dt);
  return std::min(dt, horizon);
}

SpaceTimeField solve(const SolverConfig& config, SolverDiagnostics* diagnostics) {
  config.validate();
  Integrator in(config);
  const std::size_t s = in.real_size();
  const double cell = (config.lx / config.nx) * (config.ly / config.ny) * (config.lz / config.nz);

  auto u0 = initial_velocity(config, in);
  SpecVec uh = in.to_spectral(u0);
  in.mask_and_project(uh);
  auto u = in.to_physical(uh);

  const double kmax = max_wavenumber(config);
  const double horizon = config.t_end - config.t0;
  const double dt_target = stable_time_step(config, max_speed(u, s));
  const int stride = config.output_stride;
  long steps = static_cast<long>(std::ceil(horizon / dt_target - 1e-12));
  steps = std::max<long>(steps, 1);
  steps = ((steps + stride - 1) / stride) * stride;
  const double dt = horizon / static_cast<double>(steps);
  const long n_out = steps / stride + 1;
  if (n_out * static_cast<long>(s) * 4 > (1L << 29))
    fail(ErrorCode::Configuration, "requested output exceeds the in-memory size limit");

  Grid g;
  g.nx = config.nx;
  g.ny = config.ny;
  g.nz = config.nz;
  g.lx = config.lx;
  g.ly = config.ly;
  g.lz = config.lz;
  g.nt = static_cast<int>(n_out);
  g.t0 = config.t0;
  g.dt = dt * stride;

  std::vector<double> uout(static_cast<std::size_t>(n_out) * 3 * s);
  std::vector<double> pout(static_cast<std::size_t>(n_out) * s);
  auto emit = [&](long slot, const std::vector<double>& uu) {
    std::copy(uu.begin(), uu.end(), uout.begin() + slot * 3 * s);
    auto p = in.ops().recover_pressure(uu);
    std::copy(p.begin(), p.end(), pout.begin() + slot * s);
  };

  SolverDiagnostics diag;
  diag.dt = dt;
  diag.steps = static_cast<int>(steps);
  diag.energy.push_back(kinetic_energy(u, cell));
  emit(0, u);
  for (long n = 1; n <= steps; ++n) {
    const double speed = max_speed(u, s);
    const double cfl = speed * dt * kmax;
    diag.max_cfl = std::max(diag.max_cfl, cfl);
    if (cfl > kRk4ImagLimit)
      fail(ErrorCode::Numerical, "CFL violation at step " + std::to_string(n) +
                                     ": |U|dt|k| = " + std::to_string(cfl));
    in.step(uh, dt);
    u = in.to_physical(uh);
    for (double v : u)
      if (!std::isfinite(v))
        fail(ErrorCode::Numerical, "non-finite velocity at step " + std::to_string(n));
    diag.energy.push_back(kinetic_energy(u, cell));
    if (n % stride == 0) emit(n / stride, u);
  }
  if (diagnostics) *diagnostics = std::move(diag);

  Metadata meta;
  meta["generator"] = "solver";
  switch (config.initial.kind) {
    case InitialCondition::Kind::Beltrami: meta["initial_condition"] = "beltrami"; break;
    case InitialCondition::Kind::RandomSolenoidal:
      meta["initial_condition"] = "random_solenoidal";
      meta["seed"] = std::to_string(config.initial.seed);
      break;
    case InitialCondition::Kind::FromFile: meta["initial_condition"] = "from_file"; break;
  }
  meta["steps"] = std::to_string(steps);
  return SpaceTimeField(g, std::move(uout), std::move(pout), std::nullopt, std::move(meta));
}

}  // namespace parreg
