#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oobemc/antenna.hpp"
#include "oobemc/deployment.hpp"
#include "oobemc/emitters.hpp"
#include "oobemc/geometry.hpp"
#include "oobemc/propagation.hpp"
#include "oobemc/scenario.hpp"
#include "oobemc/units.hpp"

// Per-emitter link budgets, per-trial aggregation, penalties, and
// distributional statistics. All sums run in linear milliwatts; empty sums
// report as -inf dBm.

namespace oobemc {

struct TrialResult {
  double gnb_dbm = -std::numeric_limits<double>::infinity();
  double repeater_down_dbm = -std::numeric_limits<double>::infinity();
  double ue_dbm = -std::numeric_limits<double>::infinity();
  double repeater_up_dbm = -std::numeric_limits<double>::infinity();
  double downstream_dbm = -std::numeric_limits<double>::infinity();
  double upstream_dbm = -std::numeric_limits<double>::infinity();
  double combined_dbm = -std::numeric_limits<double>::infinity();
  int n_gnb = 0;             // deployed counts
  int n_repeater_down = 0;
  int n_ue = 0;
  int n_repeater_up = 0;
  int active_gnb = 0;        // emitters that actually transmitted
  int active_repeater_down = 0;
  int active_ue = 0;
  int active_repeater_up = 0;
  int trial_index = 0;
};

enum class Metric {
  kGnb,
  kRepeaterDown,
  kUe,
  kRepeaterUp,
  kDownstream,
  kUpstream,
  kCombined,
};

inline constexpr std::array<Metric, 7> kAllMetrics = {
    Metric::kGnb,        Metric::kRepeaterDown, Metric::kUe,       Metric::kRepeaterUp,
    Metric::kDownstream, Metric::kUpstream,     Metric::kCombined};

inline const char* metric_name(Metric m) {
  switch (m) {
    case Metric::kGnb: return "gnb";
    case Metric::kRepeaterDown: return "repeater_down";
    case Metric::kUe: return "ue";
    case Metric::kRepeaterUp: return "repeater_up";
    case Metric::kDownstream: return "downstream";
    case Metric::kUpstream: return "upstream";
    case Metric::kCombined: return "combined";
  }
  return "?";
}

inline double metric_dbm(const TrialResult& r, Metric m) {
  switch (m) {
    case Metric::kGnb: return r.gnb_dbm;
    case Metric::kRepeaterDown: return r.repeater_down_dbm;
    case Metric::kUe: return r.ue_dbm;
    case Metric::kRepeaterUp: return r.repeater_up_dbm;
    case Metric::kDownstream: return r.downstream_dbm;
    case Metric::kUpstream: return r.upstream_dbm;
    case Metric::kCombined: return r.combined_dbm;
  }
  return 0.0;
}

namespace detail {

// Direction of the satellite in the emitter's antenna frame, before the
// mechanical tilt applied inside array_gain.
struct AntennaFrameAngles {
  double theta_deg;  // zenith angle
  double phi_deg;    // azimuth off boresight
};

inline double wrap_180(double deg) {
  double w = std::fmod(deg + 180.0, 360.0);
  if (w < 0.0) w += 360.0;
  return w - 180.0;
}

inline AntennaFrameAngles satellite_in_antenna_frame(const EmitterNode& e,
                                                     const LookAngles& la,
                                                     const SounderGeometry& geom) {
  const Vec3 sat = satellite_position(geom);
  const double sat_azimuth =
      rad_to_deg(std::atan2(sat.y - e.position.y_km, sat.x - e.position.x_km));
  return AntennaFrameAngles{90.0 - la.emitter_elevation_deg,
                            wrap_180(sat_azimuth - e.boresight_azimuth_deg)};
}

}  // namespace detail

// Received OOBE power at the sounder from one emitter: transmit power plus
// both antenna gains, minus path, gas, fixed, and power-control losses.
inline DecibelPower link_budget(const EmitterNode& e, const Scenario& s) {
  const LookAngles la = look_angles(e.position, s.geometry);
  const detail::AntennaFrameAngles at = detail::satellite_in_antenna_frame(e, la, s.geometry);

  const AntennaConfig& ant = s.antenna(e.kind);
  ArrayConfig array;
  array.rows = s.oobe_correlation == OobeCorrelation::kCorrelated ? ant.rows : 1;
  array.cols = s.oobe_correlation == OobeCorrelation::kCorrelated ? ant.cols : 1;
  array.spacing_wavelengths = ant.spacing_wavelengths;
  array.mechanical_downtilt_deg = ant.mechanical_downtilt_deg;
  array.steer_theta_deg = e.steer_theta_deg;
  array.steer_phi_deg = e.steer_phi_deg;
  const Decibel tx_gain = array_gain(ant.element, array, at.theta_deg, at.phi_deg);

  const Decibel sat_gain = sounder_gain(s.sounder, la.sounder_offaxis_deg);
  const PropagationLosses losses{
      fspl(s.frequency_hz, la.slant_range_km).value_db,
      gaseous_loss(s.zenith_attenuation_db, la.emitter_elevation_deg).value_db,
      s.l_other_db(e.kind)};

  const double received_dbm = e.oobe_trp.dbm - e.pwrctl_reduction_db + tx_gain.value_db +
                              sat_gain.value_db - total_loss(losses).value_db;
  return DecibelPower{received_dbm, s.ref_bandwidth_hz};
}

// Linear-domain sum of link budgets over all active emitters of a trial.
inline TrialResult aggregate_trial(const TrialDeployment& d, const Scenario& s) {
  double gnb_mw = 0.0, rep_down_mw = 0.0, ue_mw = 0.0, rep_up_mw = 0.0;
  TrialResult r;
  r.trial_index = d.trial_index;
  r.n_gnb = d.n_gnb;
  r.n_repeater_down = d.n_repeater_down;
  r.n_ue = d.n_ue;
  r.n_repeater_up = d.n_repeater_up;

  for (const auto& e : d.emitters) {
    if (!e.active) continue;
    const double mw = dbm_to_milliwatts(link_budget(e, s).dbm);
    switch (e.kind) {
      case EmitterKind::kGnb:
        gnb_mw += mw;
        ++r.active_gnb;
        break;
      case EmitterKind::kRepeaterDown:
        rep_down_mw += mw;
        ++r.active_repeater_down;
        break;
      case EmitterKind::kUe:
        ue_mw += mw;
        ++r.active_ue;
        break;
      case EmitterKind::kRepeaterUp:
        rep_up_mw += mw;
        ++r.active_repeater_up;
        break;
    }
  }

  const double down_mw = gnb_mw + rep_down_mw;
  const double up_mw = ue_mw + rep_up_mw;
  r.gnb_dbm = milliwatts_to_dbm(gnb_mw);
  r.repeater_down_dbm = milliwatts_to_dbm(rep_down_mw);
  r.ue_dbm = milliwatts_to_dbm(ue_mw);
  r.repeater_up_dbm = milliwatts_to_dbm(rep_up_mw);
  r.downstream_dbm = milliwatts_to_dbm(down_mw);
  r.upstream_dbm = milliwatts_to_dbm(up_mw);
  r.combined_dbm = milliwatts_to_dbm(down_mw + up_mw);
  return r;
}

// Expected downstream interference penalty for a network with f repeaters
// per cell versus the same network without them: 10*log10(1 + f).
inline Decibel penalty_closed_form(int repeater_factor) {
  if (repeater_factor < 0) {
    throw std::invalid_argument("penalty_closed_form: repeater factor must be >= 0");
  }
  return Decibel{10.0 * std::log10(1.0 + repeater_factor)};
}

struct MetricStatistics {
  double mean_mw = 0.0;
  double std_mw = 0.0;      // sample standard deviation of the linear powers
  double mean_dbm = -std::numeric_limits<double>::infinity();
  double median_dbm = -std::numeric_limits<double>::infinity();
  double std_dbm = -std::numeric_limits<double>::infinity();
  double p90_dbm = -std::numeric_limits<double>::infinity();
  double p99_dbm = -std::numeric_limits<double>::infinity();
  double p999_dbm = -std::numeric_limits<double>::infinity();
};

struct RunStatistics {
  int trials = 0;
  std::array<MetricStatistics, 7> metrics;  // indexed by Metric order
  std::vector<std::pair<double, double>> cdf_combined;  // (dBm, cdf)
  std::optional<double> threshold_dbm;
  std::optional<double> exceedance;  // fraction of trials with combined > threshold

  const MetricStatistics& metric(Metric m) const {
    return metrics[static_cast<std::size_t>(m)];
  }
};

namespace detail {

// Nearest-rank percentile on ascending values.
inline double percentile(const std::vector<double>& sorted, double q) {
  const auto n = sorted.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(q / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

inline MetricStatistics metric_statistics(std::vector<double> mw) {
  MetricStatistics stats;
  const double n = static_cast<double>(mw.size());
  double sum = 0.0;
  for (double v : mw) sum += v;
  stats.mean_mw = sum / n;

  double sq = 0.0;
  for (double v : mw) sq += (v - stats.mean_mw) * (v - stats.mean_mw);
  stats.std_mw = mw.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;

  std::sort(mw.begin(), mw.end());
  const double median_mw = mw.size() % 2 == 1
                               ? mw[mw.size() / 2]
                               : 0.5 * (mw[mw.size() / 2 - 1] + mw[mw.size() / 2]);

  stats.mean_dbm = milliwatts_to_dbm(stats.mean_mw);
  stats.std_dbm = milliwatts_to_dbm(stats.std_mw);
  stats.median_dbm = milliwatts_to_dbm(median_mw);
  stats.p90_dbm = milliwatts_to_dbm(percentile(mw, 90.0));
  stats.p99_dbm = milliwatts_to_dbm(percentile(mw, 99.0));
  stats.p999_dbm = milliwatts_to_dbm(percentile(mw, 99.9));
  return stats;
}

}  // namespace detail

inline RunStatistics run_statistics(const std::vector<TrialResult>& results,
                                    std::optional<double> threshold_dbm = std::nullopt) {
  if (results.empty()) {
    throw std::invalid_argument("run_statistics: no trials");
  }
  RunStatistics stats;
  stats.trials = static_cast<int>(results.size());

  for (std::size_t i = 0; i < kAllMetrics.size(); ++i) {
    std::vector<double> mw;
    mw.reserve(results.size());
    for (const auto& r : results) mw.push_back(dbm_to_milliwatts(metric_dbm(r, kAllMetrics[i])));
    stats.metrics[i] = detail::metric_statistics(std::move(mw));
  }

  std::vector<double> combined;
  combined.reserve(results.size());
  for (const auto& r : results) combined.push_back(r.combined_dbm);
  std::sort(combined.begin(), combined.end());
  stats.cdf_combined.reserve(combined.size());
  for (std::size_t i = 0; i < combined.size(); ++i) {
    stats.cdf_combined.emplace_back(combined[i],
                                    static_cast<double>(i + 1) /
                                        static_cast<double>(combined.size()));
  }

  if (threshold_dbm.has_value()) {
    stats.threshold_dbm = threshold_dbm;
    int exceeding = 0;
    for (const auto& r : results) {
      if (r.combined_dbm > *threshold_dbm) ++exceeding;
    }
    stats.exceedance = static_cast<double>(exceeding) / static_cast<double>(results.size());
  }
  return stats;
}

// Mean-of-linear power ratio between two runs, in dB. Identical runs give
// exactly zero; a silent metric in both runs compares as zero as well.
inline double penalty_empirical(const MetricStatistics& with_stats,
                                const MetricStatistics& without_stats) {
  if (with_stats.mean_mw == without_stats.mean_mw) return 0.0;
  if (without_stats.mean_mw == 0.0) return std::numeric_limits<double>::infinity();
  if (with_stats.mean_mw == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(with_stats.mean_mw / without_stats.mean_mw);
}

inline double penalty_empirical(const RunStatistics& run_with,
                                const RunStatistics& run_without, Metric metric) {
  return penalty_empirical(run_with.metric(metric), run_without.metric(metric));
}

}  // namespace oobemc
