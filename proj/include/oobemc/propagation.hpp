#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "oobemc/geometry.hpp"
#include "oobemc/units.hpp"

// Path and atmospheric losses. All losses are positive-dB attenuations.

namespace oobemc {

inline constexpr double kSpeedOfLightMPerS = 299792458.0;

struct PropagationLosses {
  double l_path_db = 0.0;
  double l_gas_db = 0.0;
  double l_other_db = 0.0;
};

// Free-space path loss, 20*log10(4*pi*d/lambda).
inline Decibel fspl(double frequency_hz, double distance_km) {
  if (!(frequency_hz > 0.0)) {
    throw std::invalid_argument("fspl: frequency must be positive");
  }
  if (!(distance_km > 0.0)) {
    throw std::invalid_argument("fspl: distance must be positive");
  }
  const double distance_m = distance_km * 1000.0;
  return Decibel{20.0 * std::log10(4.0 * kPi * distance_m * frequency_hz / kSpeedOfLightMPerS)};
}

// Slant-path gaseous absorption, cosecant model: zenith attenuation divided
// by sin(elevation). Grazing paths (elevation <= 0) are excluded.
inline Decibel gaseous_loss(double zenith_attenuation_db, double elevation_deg) {
  if (!(elevation_deg > 0.0) || !(elevation_deg <= 90.0)) {
    throw std::invalid_argument("gaseous_loss: elevation must be in (0, 90] deg, got " +
                                std::to_string(elevation_deg));
  }
  if (!(zenith_attenuation_db >= 0.0)) {
    throw std::invalid_argument("gaseous_loss: zenith attenuation must be >= 0");
  }
  return Decibel{zenith_attenuation_db / std::sin(deg_to_rad(elevation_deg))};
}

inline Decibel total_loss(const PropagationLosses& l) {
  return Decibel{l.l_path_db + l.l_gas_db + l.l_other_db};
}

}  // namespace oobemc
