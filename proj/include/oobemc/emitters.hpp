#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oobemc/geometry.hpp"
#include "oobemc/units.hpp"

// Emitter taxonomy and per-device transmit behavior.

namespace oobemc {

enum class EmitterKind {
  kGnb,           // base station, downstream
  kRepeaterDown,  // repeater re-emitting downstream traffic
  kRepeaterUp,    // repeater relaying one UE's upstream traffic
  kUe,            // user equipment, upstream
};

inline bool is_downstream(EmitterKind kind) {
  return kind == EmitterKind::kGnb || kind == EmitterKind::kRepeaterDown;
}

// One transmitter as seen by the sounder. oobe_trp holds the class OOBE
// limit in the scenario's reference bandwidth; pwrctl_reduction_db is the
// power-control backoff applied on top of it (zero for downstream classes).
struct EmitterNode {
  EmitterKind kind = EmitterKind::kGnb;
  GroundPoint position;
  DecibelPower oobe_trp;
  double pwrctl_reduction_db = 0.0;
  GroundPoint serving_position;      // for UEs: the node they steer toward
  double boresight_azimuth_deg = 0.0;
  double steer_theta_deg = 90.0;
  double steer_phi_deg = 0.0;
  bool high_power = false;
  bool active = true;
};

// Open-loop fractional power control. p0 is the target received-power
// parameter, alpha the fractional path-loss compensation factor.
struct PowerControlConfig {
  bool enabled = true;
  double p0_dbm = -90.0;
  double alpha = 1.0;
  double p_max_dbm = 22.0;
  double p_min_dbm = -40.0;
};

struct UePowerDecision {
  double tx_power_dbm = 0.0;      // in-band transmit power
  double pwrctl_reduction_db = 0.0;  // backoff relative to maximum power
};

// clamp(p0 + alpha * coupling_loss, p_min, p_max); the reduction is the
// headroom left below maximum power. Disabled power control transmits at
// maximum with zero reduction.
inline UePowerDecision ue_transmit_power(const PowerControlConfig& cfg,
                                         Decibel coupling_loss_db) {
  if (!(coupling_loss_db.value_db >= 0.0)) {
    throw std::invalid_argument("ue_transmit_power: coupling loss must be >= 0 dB");
  }
  if (!cfg.enabled) {
    return UePowerDecision{cfg.p_max_dbm, 0.0};
  }
  const double target = cfg.p0_dbm + cfg.alpha * coupling_loss_db.value_db;
  const double tx = std::clamp(target, cfg.p_min_dbm, cfg.p_max_dbm);
  return UePowerDecision{tx, cfg.p_max_dbm - tx};
}

// OOBE is assumed to track in-band transmit power dB-for-dB, so the
// power-control backoff applies unchanged to the OOBE level.
inline DecibelPower effective_ue_oobe(double pwrctl_reduction_db, const DecibelPower& base) {
  if (!(pwrctl_reduction_db >= 0.0)) {
    throw std::invalid_argument("effective_ue_oobe: reduction must be >= 0 dB");
  }
  return DecibelPower{base.dbm - pwrctl_reduction_db, base.ref_bandwidth_hz};
}

}  // namespace oobemc
