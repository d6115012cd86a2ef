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

// Local energy inequality residual:
//
//   int |U(t)|^2 phi(t) + 2 int int |grad U|^2 phi
//     - int int |U|^2 (d_s phi + Lap phi) + (|U|^2 + 2P) U.grad phi
//
// with the magnetic additions |B|^2, |grad B|^2 and -2 (B.U)(B.grad phi).

#include <cmath>
#include <numbers>
#include <tuple>
#include <unordered_map>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "parreg/error.hpp"
#include "parreg/functionals.hpp"
#include "parreg/spectral.hpp"

namespace parreg {

namespace {

// Spatial integrals against the cutoff are evaluated by Parseval: for
// band-limited periodic data, int f(y) eta((y - x)/rho) dy equals
// sum_k f_k g(|k|) e^{i k.x}, where g is the 3D Fourier transform of the
// radial profile. Derivatives of eta become multipliers i k and -|k|^2.
class CutoffSpectrum {
 public:
  CutoffSpectrum(const Grid& grid, const TestFunction& phi) : fft_(grid.nx, grid.ny, grid.nz) {
    const int nzc = grid.nz / 2 + 1;
    auto axis = [](int i, int n, double l, double* k) {
      if (n % 2 == 0 && i == n / 2) return false;
      *k = 2.0 * std::numbers::pi * (i <= n / 2 ? i : i - n) / l;
      return true;
    };
    const Vec3& x = phi.center().x;
    std::unordered_map<std::int64_t, double> radial;
    const double norm = 1.0 / static_cast<double>(grid.spatial_size());
    for (int i = 0; i < grid.nx; ++i) {
      double kx;
      if (!axis(i, grid.nx, grid.lx, &kx)) continue;
      for (int j = 0; j < grid.ny; ++j) {
        double ky;
        if (!axis(j, grid.ny, grid.ly, &ky)) continue;
        for (int k = 0; k < nzc; ++k) {
          double kz;
          if (!axis(k, grid.nz, grid.lz, &kz)) continue;
          const double k2 = kx * kx + ky * ky + kz * kz;
          // Keyed on k^2 in units of 1e-9 so equal shells share one transform.
          const auto key = static_cast<std::int64_t>(std::llround(k2 * 1e9));
          auto it = radial.find(key);
          if (it == radial.end()) it = radial.emplace(key, transform(phi, std::sqrt(k2))).first;
          const double mult = (k == 0 || (grid.nz % 2 == 0 && k == grid.nz / 2)) ? 1.0 : 2.0;
          const double arg = kx * x[0] + ky * x[1] + kz * x[2];
          entries_.push_back({(static_cast<std::size_t>(i) * grid.ny + j) * nzc + k,
                              {kx, ky, kz},
                              k2,
                              mult * norm * it->second * Complex(std::cos(arg), std::sin(arg))});
        }
      }
    }
    spec_.resize(fft_.spectral_size());
  }

  /// int f eta, int f Lap eta.
  std::pair<double, double> scalar(std::span<const double> f) {
    fft_.forward(f, spec_);
    double plain = 0.0, lap = 0.0;
    for (const auto& e : entries_) {
      const double v = (spec_[e.index] * e.weight).real();
      plain += v;
      lap -= e.k2 * v;
    }
    return {plain, lap};
  }

  /// int F . grad eta for a 3-component field stored component-major.
  double divergence_pairing(std::span<const double> f3) {
    const std::size_t s = fft_.real_size();
    double out = 0.0;
    for (int c = 0; c < 3; ++c) {
      fft_.forward(f3.subspan(c * s, s), spec_);
      for (const auto& e : entries_)
        out += (spec_[e.index] * Complex(0.0, -e.k[c]) * e.weight).real();
    }
    return out;
  }

 private:
  struct Entry {
    std::size_t index;
    std::array<double, 3> k;
    double k2;
    Complex weight;
  };

  // 4 pi int_0^{q_out rho} eta(r/rho) r^2 sin(kr)/(kr) dr.
  static double transform(const TestFunction& phi, double k) {
    const double rho = phi.rho();
    const double kr = k * rho;
    double inner;
    if (kr < 1e-2) {
      const double s = kr * kr;
      inner = rho * rho * rho * (1.0 / 3.0 - s / 30.0 + s * s / 840.0);
    } else {
      inner = (std::sin(kr) - kr * std::cos(kr)) / (k * k * k);
    }
    auto shell = [&](double r) {
      const double a = k * r;
      const double j0 = a < 1e-8 ? 1.0 : std::sin(a) / a;
      return phi.eta(r / rho) * r * r * j0;
    };
    const double outer = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        shell, rho, phi.spatial_radius(), 15, 1e-14);
    return 4.0 * std::numbers::pi * (inner + outer);
  }

  Fft3 fft_;
  std::vector<Entry> entries_;
  std::vector<Complex> spec_;
};

struct SliceTerms {
  double grad = 0.0;     // int (|grad U|^2 + |grad B|^2) eta
  double energy = 0.0;   // int (|U|^2 + |B|^2) eta
  double lap = 0.0;      // int (|U|^2 + |B|^2) Lap eta
  double flux = 0.0;     // int (|U|^2 + |B|^2 + 2P) U.grad eta - 2 (B.U)(B.grad eta)
};

}  // namespace

double FunctionalEngine::energy_residual(const TestFunction& phi, double t) const {
  const Grid& g = field_.grid();
  if (2.0 * phi.spatial_radius() >= g.min_side())
    fail(ErrorCode::Geometry, "test function support does not fit the periodic box");
  const double tol = 1e-9 * g.dt;
  const int n_t = static_cast<int>(std::lround((t - g.t0) / g.dt));
  if (n_t < 0 || n_t >= g.nt || std::abs(g.time(n_t) - t) > tol)
    fail(ErrorCode::Domain, "residual time must be a stored sample time");
  const double start = phi.support_start();
  if (start < g.t0 - tol) fail(ErrorCode::Domain, "test function support starts before the data");
  if (t <= start) return 0.0;

  const bool mhd = field_.has_b();
  const std::size_t s = g.spatial_size();
  const double rho2 = phi.rho() * phi.rho();
  CutoffSpectrum cut(g, phi);
  const auto u2 = density(Density::U2);
  const auto gu2 = density(Density::GradU2);
  std::span<const double> b2, gb2;
  if (mhd) {
    b2 = density(Density::B2);
    gb2 = density(Density::GradB2);
  }

  std::vector<double> e2(s), flux(3 * s);
  auto terms_at = [&](int n) {
    SliceTerms st;
    const auto u = field_.u_slice(n);
    const auto p = field_.p_slice(n);
    std::span<const double> b;
    if (mhd) b = field_.b_slice(n);
    const std::size_t off = static_cast<std::size_t>(n) * s;
    for (std::size_t q = 0; q < s; ++q) {
      e2[q] = u2[off + q] + (mhd ? b2[off + q] : 0.0);
      const double w = e2[q] + 2.0 * p[q];
      double bu = 0.0;
      if (mhd) bu = b[q] * u[q] + b[s + q] * u[s + q] + b[2 * s + q] * u[2 * s + q];
      for (int c = 0; c < 3; ++c) {
        flux[c * s + q] = w * u[c * s + q];
        if (mhd) flux[c * s + q] -= 2.0 * bu * b[c * s + q];
      }
    }
    std::tie(st.energy, st.lap) = cut.scalar(e2);
    if (mhd) {
      for (std::size_t q = 0; q < s; ++q) e2[q] = gu2[off + q] + gb2[off + q];
      st.grad = cut.scalar(e2).first;
    } else {
      st.grad = cut.scalar(gu2.subspan(off, s)).first;
    }
    st.flux = cut.divergence_pairing(flux);
    return st;
  };

  // Time integrand: 2 chi I_grad - chi_s I_energy - chi I_lap - chi I_flux,
  // where chi_s = d/ds chi((t_z - s)/rho^2) = -chi'(tau)/rho^2.
  auto integrand = [&](int n, const SliceTerms& st) {
    const double tau = (phi.center().t - g.time(n)) / rho2;
    const double c = phi.chi(tau);
    const double cs = -phi.chi_d1(tau) / rho2;
    return 2.0 * c * st.grad - cs * st.energy - c * st.lap - c * st.flux;
  };

  // The integrand vanishes identically at and before the support start, so
  // the composite rule can begin at the last sample not after it.
  const int n_start = std::max(0, static_cast<int>(std::floor((start - g.t0) / g.dt)));
  std::vector<double> vals;
  SliceTerms last;
  for (int n = n_start; n <= n_t; ++n) {
    const SliceTerms st = terms_at(n);
    vals.push_back(integrand(n, st));
    if (n == n_t) last = st;
  }
  double integral = 0.0;
  for (std::size_t q = 0; q + 1 < vals.size(); ++q) integral += 0.5 * g.dt * (vals[q] + vals[q + 1]);
  // Endpoint correction of the trapezoid rule; the derivative at the start
  // vanishes, the one at t uses a second-order backward difference.
  const std::size_t m = vals.size();
  if (m >= 3) {
    const double slope = (3.0 * vals[m - 1] - 4.0 * vals[m - 2] + vals[m - 3]) / (2.0 * g.dt);
    integral -= g.dt * g.dt / 12.0 * slope;
  }
  const double tau_t = (phi.center().t - t) / rho2;
  return phi.chi(tau_t) * last.energy + integral;
}

}  // namespace parreg
