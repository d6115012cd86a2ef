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

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "parreg/error.hpp"
#include "parreg/spectral.hpp"

namespace parreg {

namespace {

int signed_mode(int i, int n) { return i <= n / 2 ? i : i - n; }

std::mutex& line_planner_mutex() {
  static std::mutex m;
  return m;
}

// 1D trigonometric resampling of lines of length n onto length m.
class LineResampler {
 public:
  LineResampler(int n, int m) : n_(n), m_(m) {
    std::lock_guard<std::mutex> lock(line_planner_mutex());
    double* r_n = fftw_alloc_real(n);
    double* r_m = fftw_alloc_real(m);
    fftw_complex* c_n = fftw_alloc_complex(n / 2 + 1);
    fftw_complex* c_m = fftw_alloc_complex(m / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_r2c_1d(n, r_n, c_n, flags);
    inv_ = fftw_plan_dft_c2r_1d(m, c_m, r_m, flags);
    fftw_free(r_n);
    fftw_free(r_m);
    fftw_free(c_n);
    fftw_free(c_m);
  }
  ~LineResampler() {
    std::lock_guard<std::mutex> lock(line_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
  }
  LineResampler(const LineResampler&) = delete;
  LineResampler& operator=(const LineResampler&) = delete;

  void apply(const double* in, double* out) {
    line_in_.assign(in, in + n_);
    spec_n_.assign(n_ / 2 + 1, Complex(0.0, 0.0));
    fftw_execute_dft_r2c(fwd_, line_in_.data(),
                         reinterpret_cast<fftw_complex*>(spec_n_.data()));
    spec_m_.assign(m_ / 2 + 1, Complex(0.0, 0.0));
    const double scale = static_cast<double>(m_) / n_;
    const int kmax = std::min(n_ / 2, m_ / 2);
    for (int k = 0; k <= kmax; ++k) {
      const bool src_nyq = (n_ % 2 == 0) && k == n_ / 2;
      const bool dst_nyq = (m_ % 2 == 0) && k == m_ / 2;
      Complex v = spec_n_[k] * scale;
      if (src_nyq && !dst_nyq) v *= 0.5;                       // split +-n/2
      if (dst_nyq && !src_nyq) v = Complex(2.0 * v.real(), 0.0);  // fold +-m/2
      spec_m_[k] = v;
    }
    fftw_execute_dft_c2r(inv_, reinterpret_cast<fftw_complex*>(spec_m_.data()), out);
    const double norm = 1.0 / m_;
    for (int q = 0; q < m_; ++q) out[q] *= norm;
  }

 private:
  int n_, m_;
  fftw_plan fwd_ = nullptr;
  fftw_plan inv_ = nullptr;
  std::vector<double> line_in_;
  std::vector<Complex> spec_n_, spec_m_;
};

}  // namespace

SpectralOps::SpectralOps(int nx, int ny, int nz, double lx, double ly, double lz)
    : nx_(nx), ny_(ny), nz_(nz), lx_(lx), ly_(ly), lz_(lz), fft_(nx, ny, nz) {}

void SpectralOps::modes(int i, int j, int k, int out[3]) const {
  out[0] = signed_mode(i, nx_);
  out[1] = signed_mode(j, ny_);
  out[2] = k;
}

bool SpectralOps::is_nyquist(int i, int j, int k) const {
  return (nx_ % 2 == 0 && i == nx_ / 2) || (ny_ % 2 == 0 && j == ny_ / 2) ||
         (nz_ % 2 == 0 && k == nz_ / 2);
}

void SpectralOps::wavevector(int i, int j, int k, double out[3]) const {
  if (is_nyquist(i, j, k)) {
    out[0] = out[1] = out[2] = 0.0;
    return;
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  out[0] = two_pi / lx_ * signed_mode(i, nx_);
  out[1] = two_pi / ly_ * signed_mode(j, ny_);
  out[2] = two_pi / lz_ * k;
}

bool SpectralOps::keep_mode(int i, int j, int k, double fraction) const {
  if (is_nyquist(i, j, k)) return false;
  int m[3];
  modes(i, j, k, m);
  return std::abs(m[0]) <= fraction * 0.5 * nx_ && std::abs(m[1]) <= fraction * 0.5 * ny_ &&
         std::abs(m[2]) <= fraction * 0.5 * nz_;
}

std::vector<double> SpectralOps::derivative(std::span<const double> f, int axis) const {
  std::vector<Complex> spec(spectral_size());
  fft_.forward(f, spec);
  const int nzc = nz_ / 2 + 1;
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < ny_; ++j)
      for (int k = 0; k < nzc; ++k) {
        double kv[3];
        wavevector(i, j, k, kv);
        Complex& c = spec[(static_cast<std::size_t>(i) * ny_ + j) * nzc + k];
        c *= Complex(0.0, kv[axis]);
      }
  std::vector<double> out(real_size());
  fft_.inverse(spec, out);
  return out;
}

std::vector<std::vector<double>> SpectralOps::gradient_tensor(
    std::span<const double> u3) const {
  const std::size_t s = real_size();
  const int nzc = nz_ / 2 + 1;
  std::vector<std::vector<double>> grad(9, std::vector<double>(s));
  std::vector<Complex> spec(spectral_size()), work(spectral_size());
  for (int c = 0; c < 3; ++c) {
    fft_.forward(u3.subspan(c * s, s), spec);
    for (int axis = 0; axis < 3; ++axis) {
      for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j)
          for (int k = 0; k < nzc; ++k) {
            double kv[3];
            wavevector(i, j, k, kv);
            const std::size_t q = (static_cast<std::size_t>(i) * ny_ + j) * nzc + k;
            work[q] = spec[q] * Complex(0.0, kv[axis]);
          }
      fft_.inverse(work, grad[3 * c + axis]);
    }
  }
  return grad;
}

std::vector<double> SpectralOps::gradient_norm_sq(std::span<const double> u3) const {
  auto grad = gradient_tensor(u3);
  std::vector<double> out(real_size(), 0.0);
  for (const auto& g : grad)
    for (std::size_t q = 0; q < out.size(); ++q) out[q] += g[q] * g[q];
  return out;
}

std::vector<double> SpectralOps::divergence(std::span<const double> u3) const {
  const std::size_t s = real_size();
  const int nzc = nz_ / 2 + 1;
  std::vector<Complex> spec(spectral_size()), acc(spectral_size(), Complex(0.0, 0.0));
  for (int c = 0; c < 3; ++c) {
    fft_.forward(u3.subspan(c * s, s), spec);
    for (int i = 0; i < nx_; ++i)
      for (int j = 0; j < ny_; ++j)
        for (int k = 0; k < nzc; ++k) {
          double kv[3];
          wavevector(i, j, k, kv);
          const std::size_t q = (static_cast<std::size_t>(i) * ny_ + j) * nzc + k;
          acc[q] += spec[q] * Complex(0.0, kv[c]);
        }
  }
  std::vector<double> out(s);
  fft_.inverse(acc, out);
  return out;
}

std::vector<double> SpectralOps::laplacian(std::span<const double> f) const {
  std::vector<Complex> spec(spectral_size());
  fft_.forward(f, spec);
  const int nzc = nz_ / 2 + 1;
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < ny_; ++j)
      for (int k = 0; k < nzc; ++k) {
        double kv[3];
        wavevector(i, j, k, kv);
        spec[(static_cast<std::size_t>(i) * ny_ + j) * nzc + k] *=
            -(kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]);
      }
  std::vector<double> out(real_size());
  fft_.inverse(spec, out);
  return out;
}

std::vector<double> SpectralOps::project(std::span<const double> u3) const {
  const std::size_t s = real_size();
  const int nzc = nz_ / 2 + 1;
  std::vector<std::vector<Complex>> spec(3, std::vector<Complex>(spectral_size()));
  for (int c = 0; c < 3; ++c) fft_.forward(u3.subspan(c * s, s), spec[c]);
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < ny_; ++j)
      for (int k = 0; k < nzc; ++k) {
        double kv[3];
        wavevector(i, j, k, kv);
        const double k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
        if (k2 == 0.0) continue;
        const std::size_t q = (static_cast<std::size_t>(i) * ny_ + j) * nzc + k;
        const Complex kdotu = kv[0] * spec[0][q] + kv[1] * spec[1][q] + kv[2] * spec[2][q];
        for (int c = 0; c < 3; ++c) spec[c][q] -= kv[c] * kdotu / k2;
      }
  std::vector<double> out(3 * s);
  for (int c = 0; c < 3; ++c) fft_.inverse(spec[c], std::span<double>(out).subspan(c * s, s));
  return out;
}

std::vector<double> SpectralOps::recover_pressure(std::span<const double> u3) const {
  const std::size_t s = real_size();
  auto pad = [](int n) { return 2 * ((3 * n + 3) / 4); };  // even, >= 3n/2
  const int mx = pad(nx_), my = pad(ny_), mz = pad(nz_);
  const std::size_t sp = static_cast<std::size_t>(mx) * my * mz;

  // (U.grad)U on the padded grid, from exactly interpolated U and grad U.
  auto grad = gradient_tensor(u3);
  std::vector<std::vector<double>> up(3), gp(9);
  for (int c = 0; c < 3; ++c)
    up[c] = resample_periodic(u3.subspan(c * s, s), nx_, ny_, nz_, mx, my, mz);
  for (int q = 0; q < 9; ++q) gp[q] = resample_periodic(grad[q], nx_, ny_, nz_, mx, my, mz);

  std::vector<double> conv(3 * s);
  std::vector<double> fpad(sp);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t q = 0; q < sp; ++q)
      fpad[q] = up[0][q] * gp[3 * c + 0][q] + up[1][q] * gp[3 * c + 1][q] +
                up[2][q] * gp[3 * c + 2][q];
    auto back = resample_periodic(fpad, mx, my, mz, nx_, ny_, nz_);
    std::copy(back.begin(), back.end(), conv.begin() + c * s);
  }

  const int nzc = nz_ / 2 + 1;
  std::vector<Complex> spec(spectral_size()), acc(spectral_size(), Complex(0.0, 0.0));
  for (int c = 0; c < 3; ++c) {
    fft_.forward(std::span<const double>(conv).subspan(c * s, s), spec);
    for (int i = 0; i < nx_; ++i)
      for (int j = 0; j < ny_; ++j)
        for (int k = 0; k < nzc; ++k) {
          double kv[3];
          wavevector(i, j, k, kv);
          const std::size_t q = (static_cast<std::size_t>(i) * ny_ + j) * nzc + k;
          acc[q] += spec[q] * Complex(0.0, kv[c]);  // div F
        }
  }
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < ny_; ++j)
      for (int k = 0; k < nzc; ++k) {
        double kv[3];
        wavevector(i, j, k, kv);
        const double k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
        const std::size_t q = (static_cast<std::size_t>(i) * ny_ + j) * nzc + k;
        acc[q] = k2 > 0.0 ? acc[q] / k2 : Complex(0.0, 0.0);
      }
  std::vector<double> p(s);
  fft_.inverse(acc, p);
  return p;
}

std::vector<double> resample_periodic(std::span<const double> f, int nx, int ny, int nz,
                                      int mx, int my, int mz) {
  if (f.size() != static_cast<std::size_t>(nx) * ny * nz)
    fail(ErrorCode::InvalidArgument, "resample: input size mismatch");
  if (nx == mx && ny == my && nz == mz) return std::vector<double>(f.begin(), f.end());

  // Pass 1: z (contiguous lines) nx*ny*nz -> nx*ny*mz.
  std::vector<double> a(static_cast<std::size_t>(nx) * ny * mz);
  {
    LineResampler lr(nz, mz);
    for (std::size_t line = 0; line < static_cast<std::size_t>(nx) * ny; ++line)
      lr.apply(f.data() + line * nz, a.data() + line * mz);
  }
  // Pass 2: y. nx*ny*mz -> nx*my*mz.
  std::vector<double> b(static_cast<std::size_t>(nx) * my * mz);
  {
    LineResampler lr(ny, my);
    std::vector<double> in(ny), out(my);
    for (int i = 0; i < nx; ++i)
      for (int k = 0; k < mz; ++k) {
        for (int j = 0; j < ny; ++j) in[j] = a[(static_cast<std::size_t>(i) * ny + j) * mz + k];
        lr.apply(in.data(), out.data());
        for (int j = 0; j < my; ++j) b[(static_cast<std::size_t>(i) * my + j) * mz + k] = out[j];
      }
  }
  // Pass 3: x. nx*my*mz -> mx*my*mz.
  std::vector<double> c(static_cast<std::size_t>(mx) * my * mz);
  {
    LineResampler lr(nx, mx);
    std::vector<double> in(nx), out(mx);
    const std::size_t plane = static_cast<std::size_t>(my) * mz;
    for (std::size_t jk = 0; jk < plane; ++jk) {
      for (int i = 0; i < nx; ++i) in[i] = b[i * plane + jk];
      lr.apply(in.data(), out.data());
      for (int i = 0; i < mx; ++i) c[i * plane + jk] = out[i];
    }
  }
  return c;
}

}  // namespace parreg
