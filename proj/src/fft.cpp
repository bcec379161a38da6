// Copyright 2026 The spinorwalk Authors
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

#include "spinorwalk/fft.hpp"

#include <mutex>

#include <fftw3.h>

#include "spinorwalk/errors.hpp"

namespace spinorwalk {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

struct FftPlan::Impl {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

FftPlan::FftPlan(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  ComplexArray scratch(n);
  std::lock_guard lock(planner_mutex());
  const int len = static_cast<int>(n);
  impl_->forward = fftw_plan_dft_1d(len, as_fftw(scratch.data()), as_fftw(scratch.data()),
                                    FFTW_FORWARD, FFTW_ESTIMATE);
  impl_->backward = fftw_plan_dft_1d(len, as_fftw(scratch.data()), as_fftw(scratch.data()),
                                     FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!impl_->forward || !impl_->backward) throw NumericalError("FFTW planning failed");
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::forward(Complex* data) const {
  fftw_execute_dft(impl_->forward, as_fftw(data), as_fftw(data));
}

void FftPlan::backward(Complex* data) const {
  fftw_execute_dft(impl_->backward, as_fftw(data), as_fftw(data));
}

void FftPlan::backward_normalized(Complex* data) const {
  backward(data);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < n_; ++j) data[j] *= scale;
}

std::string fft_library_version() { return fftw_version; }

}  // namespace spinorwalk
