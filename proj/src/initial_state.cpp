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

#include "spinorwalk/initial_state.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spinorwalk/errors.hpp"

namespace spinorwalk {

SpinorState prepare_bloch_gaussian(const Grid& grid, const BandStructure& bands,
                                   const WavePacketSpec& spec) {
  if (!(spec.sigma_lambda > 0.0)) throw PreconditionError("sigma must be positive");
  if (spec.band_index < 0) throw PreconditionError("band index must be >= 0");
  if (spec.band_index >= bands.n_bands() && !bands.energies.empty()) {
    throw PreconditionError("band index " + std::to_string(spec.band_index) +
                            " not among the computed bands");
  }
  const double weight = std::norm(spec.spin.up) + std::norm(spec.spin.down);
  if (!(weight > 0.0)) throw PreconditionError("spin weights are both zero");

  const double sigma = spec.sigma_lambda * 2.0 * std::numbers::pi;  // 1/k0
  const double xc = grid.center() + spec.offset;
  const double clearance = std::min(xc - grid.x_min(), grid.x_max() - xc);
  // Envelope density exp(-(x-xc)^2 / 2 sigma^2) at the nearest edge.
  if (clearance * clearance / (2.0 * sigma * sigma) < -std::log(1e-8)) {
    throw PreconditionError("grid too narrow for a wave packet of width " +
                            std::to_string(spec.sigma_lambda) + " lambda");
  }

  const auto bloch = solve_bloch(bands.depth, spec.kappa0, spec.band_index + 1, bands.n_plane_waves);
  const Complex w_up = spec.spin.up / std::sqrt(weight);
  const Complex w_down = spec.spin.down / std::sqrt(weight);

  SpinorState state(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    Complex u{0.0, 0.0};
    for (int m = -bloch.m_max; m <= bloch.m_max; ++m) {
      const double c = bloch.coefficient(spec.band_index, m);
      if (c == 0.0) continue;
      u += c * std::polar(1.0, (spec.kappa0 + 2.0 * m) * x);
    }
    const double d = x - xc;
    u *= std::exp(-d * d / (4.0 * sigma * sigma));
    state.up[j] = w_up * u;
    state.down[j] = w_down * u;
  }
  state.normalize();
  return state;
}

}  // namespace spinorwalk
