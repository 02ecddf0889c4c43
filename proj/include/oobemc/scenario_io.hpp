#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oobemc/errors.hpp"
#include "oobemc/runner.hpp"
#include "oobemc/scenario.hpp"

// Scenario and result serialization.
//
// Scenario files are JSON; every key is optional and defaults to the values
// in Scenario, but unknown keys are rejected outright. Run outputs are a
// manifest (JSON), a per-trial CSV, and a CDF CSV. dBm values serialize with
// four decimal places; empty aggregates serialize as the literal "-inf".

namespace oobemc {

using json = nlohmann::json;

namespace detail {

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown scenario key '" + prefix + key + "'");
    }
  }
}

template <typename T>
inline void read_field(const json& obj, const char* key, T& out, const std::string& prefix) {
  if (!obj.contains(key)) return;
  try {
    obj.at(key).get_to(out);
  } catch (const json::exception& e) {
    throw ConfigError("invalid scenario: field '" + prefix + key + "': " + e.what());
  }
}

template <typename T>
inline void read_optional(const json& obj, const char* key, std::optional<T>& out,
                          const std::string& prefix) {
  if (!obj.contains(key)) return;
  if (obj.at(key).is_null()) {
    out.reset();
    return;
  }
  T value{};
  read_field(obj, key, value, prefix);
  out = value;
}

inline std::string enum_value(const json& obj, const char* key, const std::string& prefix) {
  std::string v;
  read_field(obj, key, v, prefix);
  return v;
}

}  // namespace detail

inline constexpr int kScenarioSchemaVersion = 1;

inline json scenario_to_json(const Scenario& s) {
  json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["geometry"] = {{"altitude_km", s.geometry.altitude_km},
                   {"elevation_deg", s.geometry.elevation_deg},
                   {"footprint_radius_km", s.geometry.footprint_radius_km}};
  j["frequency_hz"] = s.frequency_hz;
  j["ref_bandwidth_hz"] = s.ref_bandwidth_hz;
  j["link_frequency_hz"] = s.link_frequency_hz;
  j["gnb_density_per_km2"] = s.gnb_density_per_km2;
  j["cell_radius_km"] = s.cell_radius_km;
  j["repeater_factor_f"] = s.repeater_factor_f;
  j["repeaters_relay_upstream"] = s.repeaters_relay_upstream;
  j["ues_per_gnb"] = s.ues_per_gnb;
  j["ue_serving_policy"] =
      s.ue_serving_policy == ServingPolicy::kNearest ? "nearest" : "nearest_repeater";
  switch (s.duplex_mode) {
    case DuplexMode::kDownstream: j["duplex_mode"] = "DOWNSTREAM"; break;
    case DuplexMode::kUpstream: j["duplex_mode"] = "UPSTREAM"; break;
    case DuplexMode::kBoth: j["duplex_mode"] = "BOTH"; break;
  }
  j["tdd_downlink_fraction"] = s.tdd_downlink_fraction;
  j["network_loading"] = s.network_loading;
  j["power_control"] = {{"enabled", s.power_control.enabled},
                        {"p0_dbm", s.power_control.p0_dbm},
                        {"alpha", s.power_control.alpha},
                        {"p_max_dbm", s.power_control.p_max_dbm},
                        {"p_min_dbm", s.power_control.p_min_dbm}};
  j["high_power_ue_fraction"] = s.high_power_ue_fraction;
  j["high_power_ue"] = {{"p_max_dbm", s.high_power_ue.p_max_dbm},
                        {"power_control_enabled", s.high_power_ue.power_control_enabled}};
  const auto limit_json = [](const OobeLimit& l) {
    return json{{"dbm", l.dbm}, {"ref_bandwidth_hz", l.ref_bandwidth_hz}};
  };
  j["oobe_limits"] = {{"gnb", limit_json(s.oobe_limit_gnb)},
                      {"repeater", limit_json(s.oobe_limit_repeater)},
                      {"ue", limit_json(s.oobe_limit_ue)}};
  j["ue_oobe_offset_db"] = s.ue_oobe_offset_db.has_value() ? json(*s.ue_oobe_offset_db)
                                                           : json(nullptr);
  const auto antenna_json = [](const AntennaConfig& a) {
    return json{{"element",
                 {{"g_max_dbi", a.element.g_max_dbi},
                  {"am_db", a.element.am_db},
                  {"sla_v_db", a.element.sla_v_db},
                  {"theta_3db_deg", a.element.theta_3db_deg},
                  {"phi_3db_deg", a.element.phi_3db_deg}}},
                {"rows", a.rows},
                {"cols", a.cols},
                {"spacing_wavelengths", a.spacing_wavelengths},
                {"mechanical_downtilt_deg", a.mechanical_downtilt_deg}};
  };
  j["antennas"] = {{"gnb", antenna_json(s.antenna_gnb)},
                   {"repeater", antenna_json(s.antenna_repeater)},
                   {"ue", antenna_json(s.antenna_ue)},
                   {"sounder",
                    {{"g_max_dbi", s.sounder.g_max_dbi},
                     {"rolloff_db_per_deg2", s.sounder.rolloff_coeff_db_per_deg2},
                     {"floor_dbi", s.sounder.floor_dbi}}}};
  j["oobe_correlation"] =
      s.oobe_correlation == OobeCorrelation::kUncorrelated ? "UNCORRELATED" : "CORRELATED";
  j["zenith_attenuation_db"] = s.zenith_attenuation_db;
  j["l_other_db"] = {{"gnb", s.l_other_gnb_db},
                     {"repeater", s.l_other_repeater_db},
                     {"ue", s.l_other_ue_db}};
  j["trials"] = s.trials;
  j["master_seed"] = s.master_seed;
  j["threshold_dbm"] =
      s.threshold_dbm.has_value() ? json(*s.threshold_dbm) : json(nullptr);
  return j;
}

inline Scenario scenario_from_json(const json& root) {
  if (!root.is_object()) {
    throw ConfigError("scenario must be a JSON object");
  }
  detail::reject_unknown_keys(
      root,
      {"schema_version", "geometry", "frequency_hz", "ref_bandwidth_hz",
       "link_frequency_hz", "gnb_density_per_km2", "cell_radius_km", "repeater_factor_f",
       "repeaters_relay_upstream", "ues_per_gnb", "ue_serving_policy", "duplex_mode",
       "tdd_downlink_fraction", "network_loading", "power_control",
       "high_power_ue_fraction", "high_power_ue", "oobe_limits", "ue_oobe_offset_db",
       "antennas", "oobe_correlation", "zenith_attenuation_db", "l_other_db", "trials",
       "master_seed", "threshold_dbm"},
      "");

  Scenario s;
  using detail::read_field;
  using detail::read_optional;

  int schema_version = kScenarioSchemaVersion;
  read_field(root, "schema_version", schema_version, "");
  if (schema_version != kScenarioSchemaVersion) {
    throw ConfigError("invalid scenario: field 'schema_version' must be " +
                      std::to_string(kScenarioSchemaVersion) + ", got " +
                      std::to_string(schema_version));
  }

  if (root.contains("geometry")) {
    const json& g = root.at("geometry");
    detail::reject_unknown_keys(g, {"altitude_km", "elevation_deg", "footprint_radius_km"},
                                "geometry.");
    read_field(g, "altitude_km", s.geometry.altitude_km, "geometry.");
    read_field(g, "elevation_deg", s.geometry.elevation_deg, "geometry.");
    read_field(g, "footprint_radius_km", s.geometry.footprint_radius_km, "geometry.");
  }
  read_field(root, "frequency_hz", s.frequency_hz, "");
  read_field(root, "ref_bandwidth_hz", s.ref_bandwidth_hz, "");
  read_field(root, "link_frequency_hz", s.link_frequency_hz, "");
  read_field(root, "gnb_density_per_km2", s.gnb_density_per_km2, "");
  read_field(root, "cell_radius_km", s.cell_radius_km, "");
  read_field(root, "repeater_factor_f", s.repeater_factor_f, "");
  read_field(root, "repeaters_relay_upstream", s.repeaters_relay_upstream, "");
  read_field(root, "ues_per_gnb", s.ues_per_gnb, "");
  if (root.contains("ue_serving_policy")) {
    const std::string v = detail::enum_value(root, "ue_serving_policy", "");
    if (v == "nearest") {
      s.ue_serving_policy = ServingPolicy::kNearest;
    } else if (v == "nearest_repeater") {
      s.ue_serving_policy = ServingPolicy::kNearestRepeater;
    } else {
      throw ConfigError(
          "invalid scenario: field 'ue_serving_policy' must be one of "
          "[nearest, nearest_repeater], got '" + v + "'");
    }
  }
  if (root.contains("duplex_mode")) {
    const std::string v = detail::enum_value(root, "duplex_mode", "");
    if (v == "DOWNSTREAM") {
      s.duplex_mode = DuplexMode::kDownstream;
    } else if (v == "UPSTREAM") {
      s.duplex_mode = DuplexMode::kUpstream;
    } else if (v == "BOTH") {
      s.duplex_mode = DuplexMode::kBoth;
    } else {
      throw ConfigError(
          "invalid scenario: field 'duplex_mode' must be one of "
          "[DOWNSTREAM, UPSTREAM, BOTH], got '" + v + "'");
    }
  }
  read_field(root, "tdd_downlink_fraction", s.tdd_downlink_fraction, "");
  read_field(root, "network_loading", s.network_loading, "");
  if (root.contains("power_control")) {
    const json& p = root.at("power_control");
    detail::reject_unknown_keys(p, {"enabled", "p0_dbm", "alpha", "p_max_dbm", "p_min_dbm"},
                                "power_control.");
    read_field(p, "enabled", s.power_control.enabled, "power_control.");
    read_field(p, "p0_dbm", s.power_control.p0_dbm, "power_control.");
    read_field(p, "alpha", s.power_control.alpha, "power_control.");
    read_field(p, "p_max_dbm", s.power_control.p_max_dbm, "power_control.");
    read_field(p, "p_min_dbm", s.power_control.p_min_dbm, "power_control.");
  }
  read_field(root, "high_power_ue_fraction", s.high_power_ue_fraction, "");
  if (root.contains("high_power_ue")) {
    const json& h = root.at("high_power_ue");
    detail::reject_unknown_keys(h, {"p_max_dbm", "power_control_enabled"}, "high_power_ue.");
    read_field(h, "p_max_dbm", s.high_power_ue.p_max_dbm, "high_power_ue.");
    read_field(h, "power_control_enabled", s.high_power_ue.power_control_enabled,
               "high_power_ue.");
  }
  if (root.contains("oobe_limits")) {
    const json& o = root.at("oobe_limits");
    detail::reject_unknown_keys(o, {"gnb", "repeater", "ue"}, "oobe_limits.");
    const auto read_limit = [](const json& parent, const char* key, OobeLimit& out) {
      if (!parent.contains(key)) return;
      const json& l = parent.at(key);
      const std::string prefix = std::string("oobe_limits.") + key + ".";
      detail::reject_unknown_keys(l, {"dbm", "ref_bandwidth_hz"}, prefix);
      read_field(l, "dbm", out.dbm, prefix);
      read_field(l, "ref_bandwidth_hz", out.ref_bandwidth_hz, prefix);
    };
    read_limit(o, "gnb", s.oobe_limit_gnb);
    read_limit(o, "repeater", s.oobe_limit_repeater);
    read_limit(o, "ue", s.oobe_limit_ue);
  }
  read_optional(root, "ue_oobe_offset_db", s.ue_oobe_offset_db, "");
  if (root.contains("antennas")) {
    const json& a = root.at("antennas");
    detail::reject_unknown_keys(a, {"gnb", "repeater", "ue", "sounder"}, "antennas.");
    const auto read_antenna = [](const json& parent, const char* key, AntennaConfig& out) {
      if (!parent.contains(key)) return;
      const json& c = parent.at(key);
      const std::string prefix = std::string("antennas.") + key + ".";
      detail::reject_unknown_keys(
          c, {"element", "rows", "cols", "spacing_wavelengths", "mechanical_downtilt_deg"},
          prefix);
      if (c.contains("element")) {
        const json& e = c.at("element");
        const std::string eprefix = prefix + "element.";
        detail::reject_unknown_keys(
            e, {"g_max_dbi", "am_db", "sla_v_db", "theta_3db_deg", "phi_3db_deg"}, eprefix);
        read_field(e, "g_max_dbi", out.element.g_max_dbi, eprefix);
        read_field(e, "am_db", out.element.am_db, eprefix);
        read_field(e, "sla_v_db", out.element.sla_v_db, eprefix);
        read_field(e, "theta_3db_deg", out.element.theta_3db_deg, eprefix);
        read_field(e, "phi_3db_deg", out.element.phi_3db_deg, eprefix);
      }
      read_field(c, "rows", out.rows, prefix);
      read_field(c, "cols", out.cols, prefix);
      read_field(c, "spacing_wavelengths", out.spacing_wavelengths, prefix);
      read_field(c, "mechanical_downtilt_deg", out.mechanical_downtilt_deg, prefix);
    };
    read_antenna(a, "gnb", s.antenna_gnb);
    read_antenna(a, "repeater", s.antenna_repeater);
    read_antenna(a, "ue", s.antenna_ue);
    if (a.contains("sounder")) {
      const json& p = a.at("sounder");
      detail::reject_unknown_keys(p, {"g_max_dbi", "rolloff_db_per_deg2", "floor_dbi"},
                                  "antennas.sounder.");
      read_field(p, "g_max_dbi", s.sounder.g_max_dbi, "antennas.sounder.");
      read_field(p, "rolloff_db_per_deg2", s.sounder.rolloff_coeff_db_per_deg2,
                 "antennas.sounder.");
      read_field(p, "floor_dbi", s.sounder.floor_dbi, "antennas.sounder.");
    }
  }
  if (root.contains("oobe_correlation")) {
    const std::string v = detail::enum_value(root, "oobe_correlation", "");
    if (v == "UNCORRELATED") {
      s.oobe_correlation = OobeCorrelation::kUncorrelated;
    } else if (v == "CORRELATED") {
      s.oobe_correlation = OobeCorrelation::kCorrelated;
    } else {
      throw ConfigError(
          "invalid scenario: field 'oobe_correlation' must be one of "
          "[UNCORRELATED, CORRELATED], got '" + v + "'");
    }
  }
  read_field(root, "zenith_attenuation_db", s.zenith_attenuation_db, "");
  if (root.contains("l_other_db")) {
    const json& l = root.at("l_other_db");
    detail::reject_unknown_keys(l, {"gnb", "repeater", "ue"}, "l_other_db.");
    read_field(l, "gnb", s.l_other_gnb_db, "l_other_db.");
    read_field(l, "repeater", s.l_other_repeater_db, "l_other_db.");
    read_field(l, "ue", s.l_other_ue_db, "l_other_db.");
  }
  read_field(root, "trials", s.trials, "");
  read_field(root, "master_seed", s.master_seed, "");
  read_optional(root, "threshold_dbm", s.threshold_dbm, "");

  s.validate();
  return s;
}

inline Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open scenario file: " + path.string());
  }
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario parse error in " + path.string() + ": " + e.what());
  }
  return scenario_from_json(root);
}

// FNV-1a 64 over the canonical (sorted-key, compact) scenario dump.
inline std::string scenario_hash(const json& scenario_json) {
  const std::string dump = scenario_json.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// 4-decimal dBm formatting; the "-inf" token marks empty aggregates.
inline std::string format_dbm(double dbm) {
  if (std::isnan(dbm)) {
    throw std::logic_error("format_dbm: NaN is never a valid output value");
  }
  if (std::isinf(dbm)) return dbm < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", dbm);
  return std::string(buf);
}

namespace detail {

inline json dbm_json(double dbm) {
  if (std::isinf(dbm) || std::isnan(dbm)) return json(format_dbm(dbm));
  return json(std::round(dbm * 1e4) / 1e4);
}

inline double dbm_from_json(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    throw ConfigError("manifest: invalid dBm token '" + s + "'");
  }
  return v.get<double>();
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

}  // namespace detail

inline json manifest_to_json(const RunManifest& m) {
  const json scenario_json = scenario_to_json(m.scenario);
  json j;
  j["artifact"] = {{"name", m.artifact_name}, {"version", m.artifact_version}};
  j["rng"] = m.rng_algorithm;
  j["master_seed"] = m.scenario.master_seed;
  j["scenario"] = scenario_json;
  j["scenario_hash"] = scenario_hash(scenario_json);
  j["started_utc"] = m.started_utc;
  j["finished_utc"] = m.finished_utc;
  j["trials"] = m.statistics.trials;
  json stats;
  for (Metric metric : kAllMetrics) {
    const MetricStatistics& s = m.statistics.metric(metric);
    stats[metric_name(metric)] = {
        {"mean_dbm", detail::dbm_json(s.mean_dbm)},
        {"median_dbm", detail::dbm_json(s.median_dbm)},
        {"std_dbm", detail::dbm_json(s.std_dbm)},
        {"p90_dbm", detail::dbm_json(s.p90_dbm)},
        {"p99_dbm", detail::dbm_json(s.p99_dbm)},
        {"p99_9_dbm", detail::dbm_json(s.p999_dbm)}};
  }
  if (m.statistics.threshold_dbm.has_value()) {
    stats["exceedance"] = {{"threshold_dbm", *m.statistics.threshold_dbm},
                           {"probability", *m.statistics.exceedance}};
  }
  j["statistics"] = stats;
  return j;
}

// Statistic keys compare reads back from a manifest, in report order.
inline constexpr std::array<const char*, 6> kManifestStatKeys = {
    "mean_dbm", "median_dbm", "std_dbm", "p90_dbm", "p99_dbm", "p99_9_dbm"};

// What compare needs back from a manifest file.
struct ManifestView {
  json scenario;
  std::string scenario_hash;
  std::uint64_t master_seed = 0;
  // metric name -> stat key -> value (dBm)
  std::map<std::string, std::map<std::string, double>> stats;
};

inline ManifestView manifest_view_from_json(const json& root, const std::string& context) {
  ManifestView view;
  try {
    view.scenario = root.at("scenario");
    view.scenario_hash = root.at("scenario_hash").get<std::string>();
    view.master_seed = root.at("master_seed").get<std::uint64_t>();
    for (Metric metric : kAllMetrics) {
      const json& m = root.at("statistics").at(metric_name(metric));
      for (const char* key : kManifestStatKeys) {
        view.stats[metric_name(metric)][key] = detail::dbm_from_json(m.at(key));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("manifest " + context + " is missing required fields: " + e.what());
  }
  return view;
}

inline ManifestView load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open manifest: " + path.string());
  }
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("manifest parse error in " + path.string() + ": " + e.what());
  }
  return manifest_view_from_json(root, path.string());
}

namespace detail {

// Collects the paths of leaves that differ between two JSON values.
inline void collect_differences(const json& a, const json& b, const std::string& path,
                                std::vector<std::string>& out) {
  if (a.is_object() && b.is_object()) {
    std::set<std::string> keys;
    for (const auto& [k, v] : a.items()) keys.insert(k);
    for (const auto& [k, v] : b.items()) keys.insert(k);
    for (const auto& k : keys) {
      const std::string child = path.empty() ? k : path + "." + k;
      if (!a.contains(k) || !b.contains(k)) {
        out.push_back(child);
      } else {
        collect_differences(a.at(k), b.at(k), child, out);
      }
    }
    return;
  }
  if (a != b) out.push_back(path);
}

inline json* navigate(json& root, const std::string& dotted_path) {
  json* node = &root;
  std::stringstream ss(dotted_path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (!node->is_object() || !node->contains(part)) return nullptr;
    node = &node->at(part);
  }
  return node;
}

}  // namespace detail

// Paired penalty report: A relative to B, after checking the two scenarios
// agree everywhere except the declared knob.
inline json compare_manifests(const ManifestView& a, const ManifestView& b,
                              const std::string& knob) {
  json sa = a.scenario;
  json sb = b.scenario;
  json* ka = detail::navigate(sa, knob);
  json* kb = detail::navigate(sb, knob);
  if (ka == nullptr || kb == nullptr) {
    throw ConfigError("knob '" + knob + "' is not a scenario field");
  }
  const json knob_a = *ka;
  const json knob_b = *kb;
  *ka = nullptr;
  *kb = nullptr;
  std::vector<std::string> differences;
  detail::collect_differences(sa, sb, "", differences);
  if (!differences.empty()) {
    std::string fields;
    for (const auto& d : differences) {
      if (!fields.empty()) fields += ", ";
      fields += d;
    }
    throw PairingError("manifests differ beyond knob '" + knob + "' in: " + fields);
  }

  const auto delta_db = [](double da, double db) {
    if (da == db) return 0.0;  // covers the both-silent case
    if (std::isinf(da) || std::isinf(db)) {
      return std::isinf(db) ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
    }
    return da - db;  // mean dBm difference is the mean-of-linear ratio in dB
  };

  json report;
  report["knob"] = knob;
  report["knob_a"] = knob_a;
  report["knob_b"] = knob_b;
  json penalties;
  json by_stat;
  double down_penalty = std::numeric_limits<double>::quiet_NaN();
  double up_penalty = std::numeric_limits<double>::quiet_NaN();
  for (Metric metric : kAllMetrics) {
    const auto& stats_a = a.stats.at(metric_name(metric));
    const auto& stats_b = b.stats.at(metric_name(metric));
    const double penalty = delta_db(stats_a.at("mean_dbm"), stats_b.at("mean_dbm"));
    if (metric == Metric::kDownstream) down_penalty = penalty;
    if (metric == Metric::kUpstream) up_penalty = penalty;
    penalties[metric_name(metric)] = detail::dbm_json(penalty);
    json deltas;
    for (const char* key : {"mean_dbm", "median_dbm", "p90_dbm", "p99_dbm", "p99_9_dbm"}) {
      deltas[key] = detail::dbm_json(delta_db(stats_a.at(key), stats_b.at(key)));
    }
    by_stat[metric_name(metric)] = deltas;
  }
  report["penalties_db"] = penalties;
  report["percentile_penalties_db"] = by_stat;
  if (knob == "repeater_factor_f" && knob_a.is_number() && knob_b.is_number()) {
    const double fa = knob_a.get<double>();
    const double fb = knob_b.get<double>();
    report["closed_form_db"] =
        detail::dbm_json(10.0 * std::log10((1.0 + fa) / (1.0 + fb)));
  }
  if (std::isfinite(down_penalty) && std::isfinite(up_penalty)) {
    // dB-domain sum of the two direction penalties; an approximation, not
    // linear power addition.
    report["penalty_db_sum"] = {{"value_db", detail::dbm_json(down_penalty + up_penalty)},
                                {"approximation", true}};
  }
  return report;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  out << content;
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

inline std::string trials_csv(const std::vector<TrialResult>& results) {
  std::string csv =
      "trial,gnb_dbm,rep_down_dbm,ue_dbm,rep_up_dbm,down_dbm,up_dbm,combined_dbm,"
      "n_gnb,n_rep,n_ue_active\n";
  for (const auto& r : results) {
    csv += std::to_string(r.trial_index);
    for (double v : {r.gnb_dbm, r.repeater_down_dbm, r.ue_dbm, r.repeater_up_dbm,
                     r.downstream_dbm, r.upstream_dbm, r.combined_dbm}) {
      csv += ',';
      csv += format_dbm(v);
    }
    csv += ',' + std::to_string(r.n_gnb);
    csv += ',' + std::to_string(r.n_repeater_down);
    csv += ',' + std::to_string(r.active_ue);
    csv += '\n';
  }
  return csv;
}

inline std::string cdf_csv(const RunStatistics& stats) {
  std::string csv = "dbm,cdf\n";
  char buf[64];
  for (const auto& [dbm, cdf] : stats.cdf_combined) {
    std::snprintf(buf, sizeof(buf), "%.6f", cdf);
    csv += format_dbm(dbm) + "," + buf + "\n";
  }
  return csv;
}

struct RunOutput {
  RunManifest manifest;
  std::vector<TrialResult> results;
};

inline RunOutput run_scenario(const Scenario& s, int threads = 0) {
  RunOutput out;
  out.manifest.scenario = s;
  out.manifest.started_utc = detail::utc_timestamp();
  out.results = run_trials(s, threads);
  out.manifest.statistics = run_statistics(out.results, s.threshold_dbm);
  out.manifest.finished_utc = detail::utc_timestamp();
  return out;
}

inline void write_run_outputs(const RunManifest& manifest,
                              const std::vector<TrialResult>& results,
                              const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  }
  write_text_file(out_dir / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");
  write_text_file(out_dir / "trials.csv", trials_csv(results));
  write_text_file(out_dir / "cdf.csv", cdf_csv(manifest.statistics));
}

}  // namespace oobemc
