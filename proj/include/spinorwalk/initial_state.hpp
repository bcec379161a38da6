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

#include "spinorwalk/aligned.hpp"
#include "spinorwalk/band_structure.hpp"
#include "spinorwalk/spinor_state.hpp"

namespace spinorwalk {

struct SpinWeights {
  Complex up{0.0, 0.0};
  Complex down{1.0, 0.0};

  static SpinWeights pure_up() { return {{1.0, 0.0}, {0.0, 0.0}}; }
  static SpinWeights pure_down() { return {{0.0, 0.0}, {1.0, 0.0}}; }
};

struct WavePacketSpec {
  int band_index = 0;
  double kappa0 = 0.0;        // units k0
  double sigma_lambda = 6.0;  // density standard deviation, units of the wavelength
  SpinWeights spin = SpinWeights::pure_down();
  /// Offset of the packet centre from the box centre, units 1/k0.
  double offset = 0.0;
};

/// Bloch function of (band, kappa0) times exp(-(x - xc)^2 / 4 sigma^2), spread
/// over the spin components and normalised to one. PreconditionError if the
/// envelope density at the box edge exceeds 1e-8 of its peak.
SpinorState prepare_bloch_gaussian(const Grid& grid, const BandStructure& bands,
                                   const WavePacketSpec& spec);

}  // namespace spinorwalk
