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

#include "spinorwalk/units.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spinorwalk/errors.hpp"

namespace spinorwalk {

QuantityKind parse_quantity_kind(std::string_view name) {
  if (name == "length") return QuantityKind::length;
  if (name == "time") return QuantityKind::time;
  if (name == "energy") return QuantityKind::energy;
  if (name == "force") return QuantityKind::force;
  throw ConfigError("unknown quantity kind '" + std::string(name) + "'");
}

std::string_view to_string(QuantityKind kind) {
  switch (kind) {
    case QuantityKind::length: return "length";
    case QuantityKind::time: return "time";
    case QuantityKind::energy: return "energy";
    case QuantityKind::force: return "force";
  }
  return "?";
}

PhysicalParams::PhysicalParams(double atom_mass_kg, double wavelength_m, double depth_recoil)
    : atom_mass_(atom_mass_kg), wavelength_(wavelength_m), depth_(depth_recoil) {
  if (!(atom_mass_ > 0.0)) throw ConfigError("atom mass must be positive");
  if (!(wavelength_ > 0.0)) throw ConfigError("lattice wavelength must be positive");
  if (!(depth_ >= 0.0) || !std::isfinite(depth_)) throw ConfigError("lattice depth must be >= 0");
}

PhysicalParams PhysicalParams::cesium(double wavelength_m, double depth_recoil) {
  return {constants::cesium133_mass, wavelength_m, depth_recoil};
}

double PhysicalParams::k0() const { return 2.0 * std::numbers::pi / wavelength_; }

double PhysicalParams::recoil_energy() const {
  const double k = k0();
  return constants::hbar * constants::hbar * k * k / (2.0 * atom_mass_);
}

double PhysicalParams::time_unit() const { return constants::hbar / recoil_energy(); }

double PhysicalParams::force_unit() const { return k0() * recoil_energy(); }

PhysicalParams PhysicalParams::with_depth(double depth_recoil) const {
  return {atom_mass_, wavelength_, depth_recoil};
}

namespace {

double unit_of(const PhysicalParams& p, QuantityKind kind) {
  switch (kind) {
    case QuantityKind::length: return p.length_unit();
    case QuantityKind::time: return p.time_unit();
    case QuantityKind::energy: return p.recoil_energy();
    case QuantityKind::force: return p.force_unit();
  }
  throw ConfigError("unknown quantity kind");
}

}  // namespace

double to_dimensionless(const PhysicalParams& params, double value_si, QuantityKind kind) {
  return value_si / unit_of(params, kind);
}

double to_si(const PhysicalParams& params, double dimensionless_value, QuantityKind kind) {
  return dimensionless_value * unit_of(params, kind);
}

double rate_to_dimensionless(const PhysicalParams& params, double rate_per_second) {
  return rate_per_second * params.time_unit();
}

}  // namespace spinorwalk
