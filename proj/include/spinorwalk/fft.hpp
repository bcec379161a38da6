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

#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "spinorwalk/aligned.hpp"

namespace spinorwalk {

/// In-place complex FFT of a fixed length backed by FFTW.
///
/// Plans are built with FFTW_ESTIMATE (so the chosen algorithm does not
/// depend on timing) under a process-wide lock. Executing a plan is
/// thread-safe; one FftPlan may be shared by many threads as long as each
/// works on its own 64-byte aligned buffer.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const { return n_; }

  /// Unnormalised exp(-i k x) transform.
  void forward(Complex* data) const;
  /// Unnormalised exp(+i k x) transform; forward then backward scales by N.
  void backward(Complex* data) const;

  /// backward() followed by 1/N.
  void backward_normalized(Complex* data) const;

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

/// Version string reported by the linked FFTW.
std::string fft_library_version();

}  // namespace spinorwalk
