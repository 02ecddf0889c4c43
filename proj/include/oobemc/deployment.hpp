#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "oobemc/emitters.hpp"
#include "oobemc/geometry.hpp"
#include "oobemc/propagation.hpp"
#include "oobemc/rng.hpp"
#include "oobemc/scenario.hpp"

// Monte Carlo deployment generation.
//
// Each trial is a pure function of (scenario, master_seed, trial_index).
// gNBs, repeaters, and UEs draw from three separate substreams so that
// sweeping the repeater factor (or any per-class knob) leaves the other
// classes' draws untouched; paired runs then differ only in the swept class.
//
// Draw order, pinned for reproducibility:
//   gNB stream:      Poisson count; per gNB: position (2), boresight azimuth,
//                    steering azimuth, steering tilt, activity.
//   repeater stream: per gNB, per repeater: position (2 per rejection
//                    attempt), boresight azimuth, steering azimuth, steering
//                    tilt, activity.
//   UE stream:       per gNB, per UE: position (2 per rejection attempt),
//                    high-power subclass draw, activity.
// UE serving choice, steering, and power control are deterministic given the
// positions. Upstream relay emitters inherit their UE's activity and draw
// nothing.

namespace oobemc {

inline constexpr double kSectorHalfWidthDeg = 60.0;     // electrical steering span
inline constexpr double kMaxElectricalDowntiltDeg = 15.0;
inline constexpr double kMinLinkDistanceKm = 0.001;     // coupling-loss distance clamp

struct TrialDeployment {
  std::vector<EmitterNode> emitters;
  int n_gnb = 0;
  int n_repeater_down = 0;
  int n_ue = 0;
  int n_repeater_up = 0;
  int trial_index = 0;
  std::uint64_t trial_seed = 0;
};

namespace detail {

inline GroundPoint uniform_in_disc(const GroundPoint& center, double radius_km,
                                   TrialRng& rng) {
  const double r = radius_km * std::sqrt(rng.uniform());
  const double angle = 2.0 * kPi * rng.uniform();
  return GroundPoint{center.x_km + r * std::cos(angle), center.y_km + r * std::sin(angle)};
}

// Uniform in the disc intersected with the footprint, by rejection. The disc
// center is always inside the footprint, so acceptance cannot stall; the cap
// only guards degenerate configurations.
inline GroundPoint uniform_in_clipped_disc(const GroundPoint& center, double radius_km,
                                           const SounderGeometry& geom, TrialRng& rng) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const GroundPoint p = uniform_in_disc(center, radius_km, rng);
    if (in_footprint(p, geom)) return p;
  }
  return center;
}

inline double azimuth_toward_deg(const GroundPoint& from, const GroundPoint& to) {
  return rad_to_deg(std::atan2(to.y_km - from.y_km, to.x_km - from.x_km));
}

inline double ground_distance_km(const GroundPoint& a, const GroundPoint& b) {
  return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

// Activity probability for one emitter: Bernoulli(network_loading) thinning
// combined with the TDD direction gate, collapsed into a single draw.
inline double activity_probability(const Scenario& s, bool downstream) {
  double direction = 0.0;
  if (downstream) {
    if (s.duplex_mode != DuplexMode::kUpstream) direction = s.tdd_downlink_fraction;
  } else {
    if (s.duplex_mode != DuplexMode::kDownstream) direction = 1.0 - s.tdd_downlink_fraction;
  }
  return s.network_loading * direction;
}

struct DownstreamAttributes {
  double boresight_azimuth_deg;
  double steer_phi_deg;
  double steer_theta_deg;
  bool active;
};

inline DownstreamAttributes draw_downstream_attributes(const Scenario& s, TrialRng& rng) {
  DownstreamAttributes a;
  a.boresight_azimuth_deg = rng.uniform(0.0, 360.0);
  a.steer_phi_deg = rng.uniform(-kSectorHalfWidthDeg, kSectorHalfWidthDeg);
  a.steer_theta_deg = rng.uniform(90.0, 90.0 + kMaxElectricalDowntiltDeg);
  a.active = rng.bernoulli(activity_probability(s, /*downstream=*/true));
  return a;
}

}  // namespace detail

// gNB count is Poisson(density * footprint area); positions are uniform in
// the footprint disc via radial inversion (r = R*sqrt(u), angle = 2*pi*v).
inline std::vector<GroundPoint> drop_gnbs(const Scenario& s, TrialRng& rng) {
  const double area = kPi * s.geometry.footprint_radius_km * s.geometry.footprint_radius_km;
  const std::uint64_t count = rng.poisson(s.gnb_density_per_km2 * area);
  std::vector<GroundPoint> gnbs;
  gnbs.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    gnbs.push_back(detail::uniform_in_disc(GroundPoint{0.0, 0.0},
                                           s.geometry.footprint_radius_km, rng));
  }
  return gnbs;
}

// Exactly f repeaters per gNB, uniform in that gNB's cell disc clipped to the
// footprint. Output is grouped by gNB: repeater i*f + k belongs to gNB i.
inline std::vector<GroundPoint> drop_repeaters(const std::vector<GroundPoint>& gnbs, int f,
                                               double cell_radius_km,
                                               const SounderGeometry& geom, TrialRng& rng) {
  std::vector<GroundPoint> repeaters;
  repeaters.reserve(gnbs.size() * static_cast<std::size_t>(f));
  for (const auto& gnb : gnbs) {
    for (int k = 0; k < f; ++k) {
      repeaters.push_back(detail::uniform_in_clipped_disc(gnb, cell_radius_km, geom, rng));
    }
  }
  return repeaters;
}

// UEs per cell, uniform in the cell disc clipped to the footprint. Each UE
// serves to a node per the scenario policy and steers toward it; power
// control runs against the in-band coupling loss to that node. When upstream
// relaying is on, every repeater-served UE appends one co-located relay
// emitter carrying the UE's effective OOBE.
inline std::vector<EmitterNode> drop_ues(const std::vector<GroundPoint>& gnbs,
                                         const std::vector<GroundPoint>& repeaters,
                                         const Scenario& s, TrialRng& rng) {
  std::vector<EmitterNode> ues;
  ues.reserve(gnbs.size() * static_cast<std::size_t>(s.ues_per_gnb));
  const int f = s.repeater_factor_f;
  const double upstream_activity = detail::activity_probability(s, /*downstream=*/false);

  for (std::size_t cell = 0; cell < gnbs.size(); ++cell) {
    for (int u = 0; u < s.ues_per_gnb; ++u) {
      const GroundPoint pos =
          detail::uniform_in_clipped_disc(gnbs[cell], s.cell_radius_km, s.geometry, rng);
      const bool high_power = rng.bernoulli(s.high_power_ue_fraction);
      const bool active = rng.bernoulli(upstream_activity);

      // Serving node among this cell's gNB and its repeaters, grouped at
      // indices [cell*f, cell*f + f) in the repeater list. Ties break toward
      // the lowest candidate index (the gNB, then repeaters in drop order).
      int serving_repeater = -1;  // -1 means the gNB
      double best = detail::ground_distance_km(pos, gnbs[cell]);
      bool gnb_eligible = s.ue_serving_policy == ServingPolicy::kNearest || f == 0;
      if (!gnb_eligible) best = std::numeric_limits<double>::infinity();
      for (int k = 0; k < f; ++k) {
        const double d = detail::ground_distance_km(pos, repeaters[cell * f + k]);
        if (d < best) {
          best = d;
          serving_repeater = k;
        }
      }
      const GroundPoint serving =
          serving_repeater < 0 ? gnbs[cell] : repeaters[cell * f + serving_repeater];

      const double link_km =
          std::max(detail::ground_distance_km(pos, serving), kMinLinkDistanceKm);
      const Decibel coupling{fspl(s.link_frequency_hz, link_km).value_db + s.l_other_ue_db};
      const PowerControlConfig pc = s.power_control_for(high_power);
      const UePowerDecision power = ue_transmit_power(pc, coupling);

      EmitterNode ue;
      ue.kind = EmitterKind::kUe;
      ue.position = pos;
      ue.oobe_trp = assign_oobe_trp(EmitterKind::kUe, s, high_power);
      ue.pwrctl_reduction_db = power.pwrctl_reduction_db;
      ue.serving_position = serving;
      ue.boresight_azimuth_deg = detail::azimuth_toward_deg(pos, serving);
      ue.steer_theta_deg = 90.0;
      ue.steer_phi_deg = 0.0;
      ue.high_power = high_power;
      ue.active = active;
      ues.push_back(ue);

      if (s.repeaters_relay_upstream && serving_repeater >= 0) {
        EmitterNode relay = ue;
        relay.kind = EmitterKind::kRepeaterUp;
        relay.position = serving;
        relay.serving_position = gnbs[cell];
        relay.boresight_azimuth_deg = detail::azimuth_toward_deg(serving, gnbs[cell]);
        ues.push_back(relay);
      }
    }
  }
  return ues;
}

inline TrialDeployment generate_trial(const Scenario& s, int trial_index) {
  TrialDeployment d;
  d.trial_index = trial_index;
  d.trial_seed = trial_seed(s.master_seed, static_cast<std::uint64_t>(trial_index));

  TrialRng gnb_rng = stream_rng(s.master_seed, trial_index, RngStream::kGnb);
  TrialRng rep_rng = stream_rng(s.master_seed, trial_index, RngStream::kRepeater);
  TrialRng ue_rng = stream_rng(s.master_seed, trial_index, RngStream::kUe);

  const std::vector<GroundPoint> gnb_positions = drop_gnbs(s, gnb_rng);
  const DecibelPower gnb_oobe = assign_oobe_trp(EmitterKind::kGnb, s);
  for (const auto& pos : gnb_positions) {
    const detail::DownstreamAttributes attr = detail::draw_downstream_attributes(s, gnb_rng);
    EmitterNode node;
    node.kind = EmitterKind::kGnb;
    node.position = pos;
    node.oobe_trp = gnb_oobe;
    node.serving_position = pos;
    node.boresight_azimuth_deg = attr.boresight_azimuth_deg;
    node.steer_theta_deg = attr.steer_theta_deg;
    node.steer_phi_deg = attr.steer_phi_deg;
    node.active = attr.active;
    d.emitters.push_back(node);
  }
  d.n_gnb = static_cast<int>(gnb_positions.size());

  const DecibelPower repeater_oobe = assign_oobe_trp(EmitterKind::kRepeaterDown, s);
  const std::vector<GroundPoint> repeater_positions =
      drop_repeaters(gnb_positions, s.repeater_factor_f, s.cell_radius_km, s.geometry,
                     rep_rng);
  for (const auto& pos : repeater_positions) {
    const detail::DownstreamAttributes attr = detail::draw_downstream_attributes(s, rep_rng);
    EmitterNode node;
    node.kind = EmitterKind::kRepeaterDown;
    node.position = pos;
    node.oobe_trp = repeater_oobe;
    node.serving_position = pos;
    node.boresight_azimuth_deg = attr.boresight_azimuth_deg;
    node.steer_theta_deg = attr.steer_theta_deg;
    node.steer_phi_deg = attr.steer_phi_deg;
    node.active = attr.active;
    d.emitters.push_back(node);
  }
  d.n_repeater_down = static_cast<int>(repeater_positions.size());

  std::vector<EmitterNode> ues = drop_ues(gnb_positions, repeater_positions, s, ue_rng);
  for (auto& ue : ues) {
    if (ue.kind == EmitterKind::kUe) {
      ++d.n_ue;
    } else {
      ++d.n_repeater_up;
    }
    d.emitters.push_back(std::move(ue));
  }
  return d;
}

}  // namespace oobemc
