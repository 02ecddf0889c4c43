#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

// Spherical-Earth satellite / ground geometry.
//
// Frame: the footprint center is the origin of a local tangent plane; ground
// emitters live at (x_km, y_km, 0). Earth curvature inside the footprint is
// ignored. The sounder sits along the +x azimuth at the slant range implied
// by (elevation at center, altitude) over a spherical Earth of radius
// 6371 km, with its boresight pointed at the footprint center.

namespace oobemc {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// Local tangent-plane coordinates in km, centered on the footprint center.
struct GroundPoint {
  double x_km = 0.0;
  double y_km = 0.0;
};

struct SounderGeometry {
  double altitude_km = 824.0;       // satellite altitude above ground
  double elevation_deg = 90.0;      // elevation seen from the footprint center (90 = nadir)
  double footprint_radius_km = 25.0;  // effective field of view radius on ground
};

struct LookAngles {
  double emitter_elevation_deg = 0.0;  // elevation from the emitter toward the satellite
  double sounder_offaxis_deg = 0.0;    // angle at the satellite off its boresight
  double slant_range_km = 0.0;         // emitter-to-satellite distance
};

// Distance to a satellite at the given altitude seen under the given
// elevation, spherical-Earth law of cosines.
inline double slant_range(double elevation_deg, double altitude_km) {
  if (!(elevation_deg >= 0.0) || !(elevation_deg <= 90.0)) {
    throw std::invalid_argument("slant_range: elevation must be in [0, 90] deg, got " +
                                std::to_string(elevation_deg));
  }
  if (!(altitude_km > 0.0)) {
    throw std::invalid_argument("slant_range: altitude must be positive");
  }
  if (elevation_deg == 90.0) return altitude_km;  // nadir range is the altitude, exactly
  const double re = kEarthRadiusKm;
  const double h = altitude_km;
  const double s = std::sin(deg_to_rad(elevation_deg));
  return std::sqrt(re * re * s * s + 2.0 * re * h + h * h) - re * s;
}

namespace detail {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Satellite position in the tangent-plane frame: along the +x azimuth,
// elevated per the configured elevation at the footprint center.
inline Vec3 satellite_position(const SounderGeometry& g) {
  const double d = slant_range(g.elevation_deg, g.altitude_km);
  const double el = deg_to_rad(g.elevation_deg);
  return {d * std::cos(el), 0.0, d * std::sin(el)};
}

inline double angle_between_deg(const Vec3& a, const Vec3& b) {
  const double c = dot(a, b) / (norm(a) * norm(b));
  return rad_to_deg(std::acos(std::clamp(c, -1.0, 1.0)));
}

}  // namespace detail

// Exact 3-D line-of-sight angles between a ground emitter and the sounder.
inline LookAngles look_angles(const GroundPoint& p, const SounderGeometry& g) {
  const detail::Vec3 sat = detail::satellite_position(g);
  const detail::Vec3 emitter{p.x_km, p.y_km, 0.0};
  const detail::Vec3 to_sat = detail::sub(sat, emitter);
  const double range = detail::norm(to_sat);

  LookAngles out;
  out.slant_range_km = range;
  out.emitter_elevation_deg = rad_to_deg(std::asin(std::clamp(to_sat.z / range, -1.0, 1.0)));
  // Off-axis at the satellite: boresight ray (toward the footprint center)
  // versus the ray toward the emitter.
  const detail::Vec3 boresight{-sat.x, -sat.y, -sat.z};
  const detail::Vec3 to_emitter = detail::sub(emitter, sat);
  out.sounder_offaxis_deg = detail::angle_between_deg(boresight, to_emitter);
  return out;
}

// Membership in the circular effective field of view, boundary inclusive.
inline bool in_footprint(const GroundPoint& p, const SounderGeometry& g) {
  return std::hypot(p.x_km, p.y_km) <= g.footprint_radius_km;
}

}  // namespace oobemc
