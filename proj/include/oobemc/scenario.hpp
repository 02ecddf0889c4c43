#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "oobemc/antenna.hpp"
#include "oobemc/emitters.hpp"
#include "oobemc/errors.hpp"
#include "oobemc/geometry.hpp"
#include "oobemc/units.hpp"

// Full deployment recipe for a Monte Carlo run. Every field has a documented
// default; validate() enforces the invariants and names the offending field.

namespace oobemc {

enum class DuplexMode { kDownstream, kUpstream, kBoth };

// How a UE picks its serving node among its cell's gNB and repeaters.
//   kNearest: nearest node by ground distance, ties to the lowest index.
//   kNearestRepeater: nearest repeater when the cell has any, else the gNB
//   (models deployments where every subtended UE routes through a repeater).
enum class ServingPolicy { kNearest, kNearestRepeater };

// Whether OOBE radiates through the composite beamformed pattern
// (kCorrelated) or through a single element pattern with total radiated
// power conserved (kUncorrelated).
enum class OobeCorrelation { kUncorrelated, kCorrelated };

// A per-class OOBE limit: power integrated over its own bandwidth, rescaled
// to the scenario reference bandwidth at assignment time.
struct OobeLimit {
  double dbm = -70.0;
  double ref_bandwidth_hz = 10e3;
};

// Transmitter antenna description for one emitter class. Steering angles are
// drawn per emitter per trial; this holds the static part.
struct AntennaConfig {
  ElementPattern element;
  int rows = 8;
  int cols = 8;
  double spacing_wavelengths = 0.5;
  double mechanical_downtilt_deg = 10.0;
};

// Fixed-wireless UE subclass: higher maximum power, power control off by
// default (line-powered equipment has no battery to save).
struct HighPowerUeConfig {
  double p_max_dbm = 40.0;
  bool power_control_enabled = false;
};

struct Scenario {
  SounderGeometry geometry{824.0, 90.0, 25.0};
  double frequency_hz = 23.8e9;       // EESS center
  double ref_bandwidth_hz = 200e6;    // EESS reference bandwidth
  double link_frequency_hz = 24.35e9;  // IMT carrier, used for coupling loss

  double gnb_density_per_km2 = 0.1;
  double cell_radius_km = 0.3;
  int repeater_factor_f = 0;
  bool repeaters_relay_upstream = false;
  int ues_per_gnb = 3;
  ServingPolicy ue_serving_policy = ServingPolicy::kNearest;

  DuplexMode duplex_mode = DuplexMode::kDownstream;
  double tdd_downlink_fraction = 0.75;
  double network_loading = 0.5;

  PowerControlConfig power_control;
  double high_power_ue_fraction = 0.0;
  HighPowerUeConfig high_power_ue;

  OobeLimit oobe_limit_gnb{-70.0, 10e3};
  OobeLimit oobe_limit_repeater{-70.0, 10e3};
  OobeLimit oobe_limit_ue{-70.0, 10e3};
  // When set, UE base OOBE is (subclass p_max - offset) in the reference
  // bandwidth instead of the absolute UE limit.
  std::optional<double> ue_oobe_offset_db;

  AntennaConfig antenna_gnb{ElementPattern{}, 8, 8, 0.5, 10.0};
  AntennaConfig antenna_repeater{ElementPattern{}, 8, 8, 0.5, 10.0};
  AntennaConfig antenna_ue{ElementPattern{}, 4, 4, 0.5, 0.0};
  SounderPattern sounder{45.0, 2.5, -10.0};
  OobeCorrelation oobe_correlation = OobeCorrelation::kUncorrelated;

  double zenith_attenuation_db = 1.0;
  double l_other_gnb_db = 3.0;
  double l_other_repeater_db = 3.0;
  double l_other_ue_db = 3.0;

  int trials = 1000;
  std::uint64_t master_seed = 1;
  std::optional<double> threshold_dbm;  // exceedance threshold in ref bandwidth

  void validate() const;

  double l_other_db(EmitterKind kind) const {
    switch (kind) {
      case EmitterKind::kGnb: return l_other_gnb_db;
      case EmitterKind::kUe: return l_other_ue_db;
      default: return l_other_repeater_db;
    }
  }

  const AntennaConfig& antenna(EmitterKind kind) const {
    switch (kind) {
      case EmitterKind::kGnb: return antenna_gnb;
      case EmitterKind::kUe: return antenna_ue;
      default: return antenna_repeater;
    }
  }

  PowerControlConfig power_control_for(bool high_power) const {
    if (!high_power) return power_control;
    PowerControlConfig cfg = power_control;
    cfg.enabled = high_power_ue.power_control_enabled;
    cfg.p_max_dbm = high_power_ue.p_max_dbm;
    return cfg;
  }
};

namespace detail {

inline void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError("invalid scenario: field '" + field + "' " + why);
}

}  // namespace detail

// Per-class base OOBE TRP in the scenario reference bandwidth. Repeaters use
// the same limit family as gNBs unless configured otherwise; upstream relay
// emitters inherit their UE's values at deployment time, so the repeater
// limit returned here only seeds non-relay uses.
inline DecibelPower assign_oobe_trp(EmitterKind kind, const Scenario& s,
                                    bool high_power = false) {
  switch (kind) {
    case EmitterKind::kGnb:
      return bandwidth_rescale(DecibelPower{s.oobe_limit_gnb.dbm,
                                            s.oobe_limit_gnb.ref_bandwidth_hz},
                               s.ref_bandwidth_hz);
    case EmitterKind::kRepeaterDown:
    case EmitterKind::kRepeaterUp:
      return bandwidth_rescale(DecibelPower{s.oobe_limit_repeater.dbm,
                                            s.oobe_limit_repeater.ref_bandwidth_hz},
                               s.ref_bandwidth_hz);
    case EmitterKind::kUe: {
      if (s.ue_oobe_offset_db.has_value()) {
        const double p_max = s.power_control_for(high_power).p_max_dbm;
        return DecibelPower{p_max - *s.ue_oobe_offset_db, s.ref_bandwidth_hz};
      }
      return bandwidth_rescale(DecibelPower{s.oobe_limit_ue.dbm,
                                            s.oobe_limit_ue.ref_bandwidth_hz},
                               s.ref_bandwidth_hz);
    }
  }
  throw ConfigError("assign_oobe_trp: unknown emitter kind");
}

inline void Scenario::validate() const {
  using detail::require;
  require(geometry.altitude_km > 0, "geometry.altitude_km", "must be > 0");
  require(geometry.elevation_deg > 0 && geometry.elevation_deg <= 90,
          "geometry.elevation_deg", "must be in (0, 90]");
  require(geometry.footprint_radius_km > 0, "geometry.footprint_radius_km", "must be > 0");
  require(frequency_hz > 0, "frequency_hz", "must be > 0");
  require(ref_bandwidth_hz > 0, "ref_bandwidth_hz", "must be > 0");
  require(link_frequency_hz > 0, "link_frequency_hz", "must be > 0");
  require(gnb_density_per_km2 >= 0, "gnb_density_per_km2", "must be >= 0");
  require(cell_radius_km > 0, "cell_radius_km", "must be > 0");
  require(repeater_factor_f >= 0, "repeater_factor_f", "must be >= 0");
  require(ues_per_gnb >= 0, "ues_per_gnb", "must be >= 0");
  require(tdd_downlink_fraction >= 0 && tdd_downlink_fraction <= 1,
          "tdd_downlink_fraction", "must be in [0, 1]");
  require(network_loading >= 0 && network_loading <= 1, "network_loading",
          "must be in [0, 1]");
  require(power_control.alpha >= 0 && power_control.alpha <= 1, "power_control.alpha",
          "must be in [0, 1]");
  require(power_control.p_min_dbm <= power_control.p_max_dbm, "power_control.p_min_dbm",
          "must be <= p_max_dbm");
  require(high_power_ue_fraction >= 0 && high_power_ue_fraction <= 1,
          "high_power_ue_fraction", "must be in [0, 1]");
  require(power_control.p_min_dbm <= high_power_ue.p_max_dbm, "high_power_ue.p_max_dbm",
          "must be >= power_control.p_min_dbm");
  require(oobe_limit_gnb.ref_bandwidth_hz > 0, "oobe_limits.gnb.ref_bandwidth_hz",
          "must be > 0");
  require(oobe_limit_repeater.ref_bandwidth_hz > 0, "oobe_limits.repeater.ref_bandwidth_hz",
          "must be > 0");
  require(oobe_limit_ue.ref_bandwidth_hz > 0, "oobe_limits.ue.ref_bandwidth_hz",
          "must be > 0");
  const auto check_antenna = [](const std::string& name, const AntennaConfig& cfg) {
    require(cfg.rows >= 1, name + ".rows", "must be >= 1");
    require(cfg.cols >= 1, name + ".cols", "must be >= 1");
    require(cfg.spacing_wavelengths > 0, name + ".spacing_wavelengths", "must be > 0");
    require(cfg.element.am_db > 0, name + ".element.am_db", "must be > 0");
    require(cfg.element.sla_v_db > 0, name + ".element.sla_v_db", "must be > 0");
    require(cfg.element.theta_3db_deg > 0 && cfg.element.theta_3db_deg < 180,
            name + ".element.theta_3db_deg", "must be in (0, 180)");
    require(cfg.element.phi_3db_deg > 0 && cfg.element.phi_3db_deg < 180,
            name + ".element.phi_3db_deg", "must be in (0, 180)");
  };
  check_antenna("antennas.gnb", antenna_gnb);
  check_antenna("antennas.repeater", antenna_repeater);
  check_antenna("antennas.ue", antenna_ue);
  require(sounder.g_max_dbi > sounder.floor_dbi, "antennas.sounder.g_max_dbi",
          "must be > floor_dbi");
  require(sounder.rolloff_coeff_db_per_deg2 >= 0, "antennas.sounder.rolloff_db_per_deg2",
          "must be >= 0");
  require(zenith_attenuation_db >= 0, "zenith_attenuation_db", "must be >= 0");
  require(l_other_gnb_db >= 0, "l_other_db.gnb", "must be >= 0");
  require(l_other_repeater_db >= 0, "l_other_db.repeater", "must be >= 0");
  require(l_other_ue_db >= 0, "l_other_db.ue", "must be >= 0");
  require(trials >= 1, "trials", "must be >= 1");
  if (ue_oobe_offset_db.has_value()) {
    require(std::isfinite(*ue_oobe_offset_db), "ue_oobe_offset_db", "must be finite");
  }
  if (threshold_dbm.has_value()) {
    require(std::isfinite(*threshold_dbm), "threshold_dbm", "must be finite");
  }
}

}  // namespace oobemc
