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

#include <string_view>

namespace spinorwalk {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;            // J s (CODATA 2018)
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J/T
inline constexpr double cesium133_mass = 132.905451961 * atomic_mass_unit;
}  // namespace constants

enum class QuantityKind { length, time, energy, force };

/// Parses "length", "time", "energy" or "force"; anything else is a ConfigError.
QuantityKind parse_quantity_kind(std::string_view name);
std::string_view to_string(QuantityKind kind);

/// Atom and lattice parameters.
///
/// The numerical core works in lattice units: length 1/k0, energy E_R,
/// time hbar/E_R and force k0 E_R. k0 and E_R are derived on demand from the
/// wavelength and the mass, so they can never disagree with them.
class PhysicalParams {
 public:
  PhysicalParams(double atom_mass_kg, double wavelength_m, double depth_recoil);

  static PhysicalParams cesium(double wavelength_m = 1064e-9, double depth_recoil = 1.0);

  double atom_mass() const { return atom_mass_; }
  double wavelength() const { return wavelength_; }
  /// Lattice depth V0 in units of E_R.
  double depth() const { return depth_; }

  double k0() const;
  double recoil_energy() const;
  double length_unit() const { return 1.0 / k0(); }
  double time_unit() const;
  double force_unit() const;

  PhysicalParams with_depth(double depth_recoil) const;

 private:
  double atom_mass_;
  double wavelength_;
  double depth_;
};

double to_dimensionless(const PhysicalParams& params, double value_si, QuantityKind kind);
double to_si(const PhysicalParams& params, double dimensionless_value, QuantityKind kind);

/// A rate in 1/s expressed per unit of hbar/E_R.
double rate_to_dimensionless(const PhysicalParams& params, double rate_per_second);

}  // namespace spinorwalk
