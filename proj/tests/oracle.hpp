#pragma once

#include <cmath>

#include "oobemc/deployment.hpp"
#include "oobemc/scenario.hpp"

// Brute-force reference aggregation used to cross-check the production
// pipeline. Everything below is recomputed from first principles — own
// vector algebra, own pattern formulas, own path-loss arrangement — in
// long double watts. Only the plain data structs are shared with the
// library; none of its math is.

namespace oracle {

inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;

struct ClassWatts {
  long double gnb = 0.0L;
  long double repeater_down = 0.0L;
  long double ue = 0.0L;
  long double repeater_up = 0.0L;
};

namespace detail {

inline long double deg2rad(long double deg) { return deg * kPiL / 180.0L; }
inline long double rad2deg(long double rad) { return rad * 180.0L / kPiL; }

struct V3 {
  long double x, y, z;
};

inline long double ref_element_gain_db(const oobemc::ElementPattern& p, long double theta,
                                       long double phi) {
  const long double ah =
      -std::fmin(12.0L * (phi / p.phi_3db_deg) * (phi / p.phi_3db_deg),
                 static_cast<long double>(p.am_db));
  const long double tv = (theta - 90.0L) / p.theta_3db_deg;
  const long double av = -std::fmin(12.0L * tv * tv, static_cast<long double>(p.sla_v_db));
  return p.g_max_dbi - std::fmin(-(ah + av), static_cast<long double>(p.am_db));
}

inline long double wrap180(long double deg) {
  long double w = std::fmod(deg + 180.0L, 360.0L);
  if (w < 0.0L) w += 360.0L;
  return w - 180.0L;
}

}  // namespace detail

// Recomputes the aggregate received power per emitter class for one
// deployment. Inactive emitters contribute nothing.
inline ClassWatts brute_force_watts(const oobemc::TrialDeployment& d,
                                    const oobemc::Scenario& s) {
  using detail::V3;
  using detail::deg2rad;
  using detail::rad2deg;

  // Satellite position over the tangent plane, spherical-Earth slant range.
  const long double re = 6371.0L;
  const long double h = s.geometry.altitude_km;
  const long double el = deg2rad(s.geometry.elevation_deg);
  long double srange;
  if (s.geometry.elevation_deg == 90.0) {
    srange = h;
  } else {
    const long double sl = std::sin(el);
    srange = std::sqrt(re * re * sl * sl + 2.0L * re * h + h * h) - re * sl;
  }
  const V3 sat{srange * std::cos(el), 0.0L, srange * std::sin(el)};

  const long double lambda_m = 299792458.0L / static_cast<long double>(s.frequency_hz);

  ClassWatts out;
  for (const auto& e : d.emitters) {
    if (!e.active) continue;

    const V3 to_sat{sat.x - static_cast<long double>(e.position.x_km),
                    sat.y - static_cast<long double>(e.position.y_km), sat.z};
    const long double range_km =
        std::sqrt(to_sat.x * to_sat.x + to_sat.y * to_sat.y + to_sat.z * to_sat.z);
    const long double emitter_el = rad2deg(std::asin(to_sat.z / range_km));

    // Off-axis at the satellite between its boresight (toward the origin)
    // and the ray to the emitter.
    const V3 bore{-sat.x, -sat.y, -sat.z};
    const V3 to_em{-to_sat.x, -to_sat.y, -to_sat.z};
    long double cosang =
        (bore.x * to_em.x + bore.y * to_em.y + bore.z * to_em.z) / (srange * range_km);
    if (cosang > 1.0L) cosang = 1.0L;
    if (cosang < -1.0L) cosang = -1.0L;
    const long double offaxis = rad2deg(std::acos(cosang));

    // Satellite direction in the emitter's antenna frame.
    const long double sat_az = rad2deg(std::atan2(to_sat.y, to_sat.x));
    long double theta = 90.0L - emitter_el;
    long double phi = detail::wrap180(sat_az - e.boresight_azimuth_deg);

    const oobemc::AntennaConfig& ant = s.antenna(e.kind);
    if (ant.mechanical_downtilt_deg != 0.0) {
      const long double th = deg2rad(theta);
      const long double ph = deg2rad(phi);
      const long double b = deg2rad(ant.mechanical_downtilt_deg);
      const long double x = std::sin(th) * std::cos(ph);
      const long double y = std::sin(th) * std::sin(ph);
      const long double z = std::cos(th);
      const long double xr = x * std::cos(b) - z * std::sin(b);
      long double zr = x * std::sin(b) + z * std::cos(b);
      if (zr > 1.0L) zr = 1.0L;
      if (zr < -1.0L) zr = -1.0L;
      theta = rad2deg(std::acos(zr));
      phi = rad2deg(std::atan2(y, xr));
    }

    long double tx_gain = detail::ref_element_gain_db(ant.element, theta, phi);
    const int n = (s.oobe_correlation == oobemc::OobeCorrelation::kCorrelated)
                      ? ant.rows * ant.cols
                      : 1;
    if (n > 1) {
      const auto terms = [&](long double th_deg, long double ph_deg, long double& v,
                             long double& hz) {
        const long double th = deg2rad(th_deg);
        const long double ph = deg2rad(ph_deg);
        v = 2.0L * kPiL * ant.spacing_wavelengths * std::cos(th);
        hz = 2.0L * kPiL * ant.spacing_wavelengths * std::sin(th) * std::sin(ph);
      };
      long double ev, eh, sv, sh;
      terms(theta, phi, ev, eh);
      terms(e.steer_theta_deg, e.steer_phi_deg, sv, sh);
      long double sre = 0.0L, sim = 0.0L;
      for (int m = 0; m < ant.rows; ++m) {
        for (int k = 0; k < ant.cols; ++k) {
          const long double delta = m * (ev - sv) + k * (eh - sh);
          sre += std::cos(delta);
          sim += std::sin(delta);
        }
      }
      long double factor = (sre * sre + sim * sim) / static_cast<long double>(n);
      if (factor < 1e-12L) factor = 1e-12L;
      tx_gain += 10.0L * std::log10(factor);
    }

    long double sat_gain = s.sounder.g_max_dbi -
                           s.sounder.rolloff_coeff_db_per_deg2 * offaxis * offaxis;
    if (sat_gain < s.sounder.floor_dbi) sat_gain = s.sounder.floor_dbi;

    // FSPL via wavelength rather than d*f/c — same law, different route.
    const long double path_db =
        20.0L * std::log10(4.0L * kPiL * range_km * 1000.0L / lambda_m);
    const long double gas_db =
        static_cast<long double>(s.zenith_attenuation_db) / std::sin(deg2rad(emitter_el));
    const long double other_db = s.l_other_db(e.kind);

    const long double received_dbm = static_cast<long double>(e.oobe_trp.dbm) -
                                     e.pwrctl_reduction_db + tx_gain + sat_gain - path_db -
                                     gas_db - other_db;
    const long double watts = std::pow(10.0L, (received_dbm - 30.0L) / 10.0L);

    switch (e.kind) {
      case oobemc::EmitterKind::kGnb: out.gnb += watts; break;
      case oobemc::EmitterKind::kRepeaterDown: out.repeater_down += watts; break;
      case oobemc::EmitterKind::kUe: out.ue += watts; break;
      case oobemc::EmitterKind::kRepeaterUp: out.repeater_up += watts; break;
    }
  }
  return out;
}

}  // namespace oracle
