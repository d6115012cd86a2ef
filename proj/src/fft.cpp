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

#include <mutex>
#include <vector>

#include "parreg/error.hpp"
#include "parreg/spectral.hpp"

namespace parreg {

namespace {
// FFTW planning is not thread-safe; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Fft3::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

Fft3::Fft3(int nx, int ny, int nz)
    : nx_(nx), ny_(ny), nz_(nz), plans_(std::make_unique<Plans>()) {
  if (nx < 1 || ny < 1 || nz < 1) fail(ErrorCode::InvalidArgument, "bad FFT size");
  std::lock_guard<std::mutex> lock(planner_mutex());
  double* real = fftw_alloc_real(real_size());
  fftw_complex* spec = fftw_alloc_complex(spectral_size());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->r2c = fftw_plan_dft_r2c_3d(nx, ny, nz, real, spec, flags);
  plans_->c2r = fftw_plan_dft_c2r_3d(nx, ny, nz, spec, real, flags);
  fftw_free(real);
  fftw_free(spec);
  if (!plans_->r2c || !plans_->c2r) fail(ErrorCode::Internal, "FFTW planning failed");
}

Fft3::~Fft3() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plans_->r2c) fftw_destroy_plan(plans_->r2c);
  if (plans_->c2r) fftw_destroy_plan(plans_->c2r);
}

void Fft3::forward(std::span<const double> in, std::span<Complex> out) const {
  if (in.size() != real_size() || out.size() != spectral_size())
    fail(ErrorCode::Internal, "FFT buffer size mismatch");
  // Out-of-place r2c preserves its input.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void Fft3::inverse(std::span<const Complex> in, std::span<double> out) const {
  if (in.size() != spectral_size() || out.size() != real_size())
    fail(ErrorCode::Internal, "FFT buffer size mismatch");
  std::vector<Complex> scratch(in.begin(), in.end());  // c2r destroys its input
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  const double norm = 1.0 / static_cast<double>(real_size());
  for (double& v : out) v *= norm;
}

}  // namespace parreg
