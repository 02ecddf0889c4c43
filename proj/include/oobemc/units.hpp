#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

#include "oobemc/errors.hpp"

// Decibel / linear power arithmetic.
//
// Conventions used throughout the library:
//   - Power levels are dBm tied to an explicit reference (integration)
//     bandwidth. Rescaling between bandwidths assumes a spectrally flat
//     emission density.
//   - Loss quantities (path, gas, polarization, power-control backoff) are
//     stored as positive-dB attenuations and subtracted in dB link budgets.
//   - Aggregation happens in linear milliwatts; dB is an I/O representation.

namespace oobemc {

// Dimensionless ratio in dB. Gains are positive; losses are stored as
// positive attenuations by the owning field's convention.
struct Decibel {
  double value_db = 0.0;
};

// An RF power level in dBm together with the bandwidth it is integrated over.
struct DecibelPower {
  double dbm = 0.0;
  double ref_bandwidth_hz = 0.0;
};

inline double db_to_linear(Decibel value) {
  if (!std::isfinite(value.value_db)) {
    throw std::invalid_argument("db_to_linear: non-finite dB value");
  }
  return std::pow(10.0, value.value_db / 10.0);
}

inline Decibel linear_to_db(double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw std::invalid_argument("linear_to_db: ratio must be positive and finite, got " +
                                std::to_string(ratio));
  }
  return Decibel{10.0 * std::log10(ratio)};
}

// dBm <-> linear milliwatts. Zero milliwatts maps to -inf dBm, the "no power"
// sentinel used by aggregate reporting.
inline double dbm_to_milliwatts(double dbm) { return std::pow(10.0, dbm / 10.0); }

inline double milliwatts_to_dbm(double mw) {
  if (mw < 0.0) {
    throw std::invalid_argument("milliwatts_to_dbm: negative power");
  }
  if (mw == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mw);
}

// Renormalizes a power level to a different integration bandwidth assuming a
// flat spectral density across both bandwidths.
inline DecibelPower bandwidth_rescale(const DecibelPower& p, double target_bandwidth_hz) {
  if (!(p.ref_bandwidth_hz > 0.0)) {
    throw std::invalid_argument("bandwidth_rescale: source bandwidth must be positive");
  }
  if (!std::isfinite(p.dbm)) {
    throw std::invalid_argument("bandwidth_rescale: non-finite dBm");
  }
  if (!(target_bandwidth_hz > 0.0) || !std::isfinite(target_bandwidth_hz)) {
    throw std::invalid_argument("bandwidth_rescale: target bandwidth must be positive");
  }
  return DecibelPower{p.dbm + 10.0 * std::log10(target_bandwidth_hz / p.ref_bandwidth_hz),
                      target_bandwidth_hz};
}

// Linear-domain sum of power levels sharing one reference bandwidth.
inline DecibelPower power_sum(std::span<const DecibelPower> powers) {
  if (powers.empty()) {
    throw std::invalid_argument("power_sum: empty input");
  }
  const double bw = powers.front().ref_bandwidth_hz;
  double total_mw = 0.0;
  for (const auto& p : powers) {
    if (p.ref_bandwidth_hz != bw) {
      throw UnitMismatchError("power_sum: mixed reference bandwidths (" +
                              std::to_string(bw) + " Hz vs " +
                              std::to_string(p.ref_bandwidth_hz) + " Hz)");
    }
    total_mw += dbm_to_milliwatts(p.dbm);
  }
  return DecibelPower{milliwatts_to_dbm(total_mw), bw};
}

}  // namespace oobemc
