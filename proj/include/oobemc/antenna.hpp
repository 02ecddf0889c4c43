#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "oobemc/geometry.hpp"
#include "oobemc/units.hpp"

// Directional gain models.
//
// Transmitter elements follow the parabolic-in-dB element pattern used in
// IMT coexistence studies; composite beamforming gain is the uniform-
// amplitude phased superposition of rows x cols elements. Angles use the
// array convention: theta in [0, 180] measured from zenith (boresight plane
// at theta = 90), phi in [-180, 180] azimuth off boresight.
//
// The sounder receive pattern is parametric: quadratic (Gaussian-in-dB)
// rolloff from boresight down to a far-sidelobe floor.

namespace oobemc {

struct ElementPattern {
  double g_max_dbi = 5.0;      // peak element gain
  double am_db = 30.0;         // front-to-back ratio
  double sla_v_db = 30.0;      // side-lobe floor
  double theta_3db_deg = 65.0;  // vertical half-power beamwidth
  double phi_3db_deg = 65.0;    // horizontal half-power beamwidth
};

struct ArrayConfig {
  int rows = 8;                       // vertical element count
  int cols = 8;                       // horizontal element count
  double spacing_wavelengths = 0.5;   // inter-element spacing, both axes
  double steer_theta_deg = 90.0;      // electrical steering, zenith angle
  double steer_phi_deg = 0.0;         // electrical steering, azimuth
  double mechanical_downtilt_deg = 0.0;
};

struct SounderPattern {
  double g_max_dbi = 45.0;               // boresight gain
  double rolloff_coeff_db_per_deg2 = 2.5;  // quadratic rolloff coefficient
  double floor_dbi = -10.0;              // far-sidelobe floor
};

namespace detail {

inline void check_pattern_angles(double theta_deg, double phi_deg, const char* who) {
  if (!(theta_deg >= 0.0) || !(theta_deg <= 180.0)) {
    throw std::invalid_argument(std::string(who) + ": theta must be in [0, 180] deg, got " +
                                std::to_string(theta_deg));
  }
  if (!(phi_deg >= -180.0) || !(phi_deg <= 180.0)) {
    throw std::invalid_argument(std::string(who) + ": phi must be in [-180, 180] deg, got " +
                                std::to_string(phi_deg));
  }
}

}  // namespace detail

inline Decibel element_gain(const ElementPattern& p, double theta_deg, double phi_deg) {
  detail::check_pattern_angles(theta_deg, phi_deg, "element_gain");
  const double ah = -std::min(12.0 * (phi_deg / p.phi_3db_deg) * (phi_deg / p.phi_3db_deg),
                              p.am_db);
  const double t = (theta_deg - 90.0) / p.theta_3db_deg;
  const double av = -std::min(12.0 * t * t, p.sla_v_db);
  const double attenuation = -std::min(-(ah + av), p.am_db);
  return Decibel{p.g_max_dbi + attenuation};
}

// Composite gain of a rows x cols uniform array steered to
// (steer_theta, steer_phi). Mechanical downtilt is applied by rotating the
// evaluation direction about the horizontal axis orthogonal to boresight
// before both the element pattern and the array factor are evaluated.
inline Decibel array_gain(const ElementPattern& e, const ArrayConfig& a,
                          double theta_deg, double phi_deg) {
  detail::check_pattern_angles(theta_deg, phi_deg, "array_gain");
  if (a.rows < 1 || a.cols < 1) {
    throw std::invalid_argument("array_gain: rows and cols must be >= 1");
  }

  double theta = theta_deg;
  double phi = phi_deg;
  if (a.mechanical_downtilt_deg != 0.0) {
    // Rotate the unit direction by the downtilt about the y axis, so the
    // tilted boresight maps back to (theta = 90, phi = 0).
    const double th = deg_to_rad(theta_deg);
    const double ph = deg_to_rad(phi_deg);
    const double b = deg_to_rad(a.mechanical_downtilt_deg);
    const double x = std::sin(th) * std::cos(ph);
    const double y = std::sin(th) * std::sin(ph);
    const double z = std::cos(th);
    const double xr = x * std::cos(b) - z * std::sin(b);
    const double zr = x * std::sin(b) + z * std::cos(b);
    theta = rad_to_deg(std::acos(std::clamp(zr, -1.0, 1.0)));
    phi = rad_to_deg(std::atan2(y, xr));
  }

  const Decibel element = element_gain(e, theta, phi);
  const int n = a.rows * a.cols;
  if (n == 1) return element;

  // Per-element phase: 2*pi*spacing*(m*cos(theta) + n*sin(theta)*sin(phi)),
  // rows along the vertical axis, columns along the horizontal axis. The
  // steering weights are the conjugate phases at the steering direction.
  const auto phase_terms = [&a](double th_deg, double ph_deg, double& vert, double& horiz) {
    const double th = deg_to_rad(th_deg);
    const double ph = deg_to_rad(ph_deg);
    vert = 2.0 * kPi * a.spacing_wavelengths * std::cos(th);
    horiz = 2.0 * kPi * a.spacing_wavelengths * std::sin(th) * std::sin(ph);
  };
  double ev, eh, sv, sh;
  phase_terms(theta, phi, ev, eh);
  phase_terms(a.steer_theta_deg, a.steer_phi_deg, sv, sh);

  std::complex<double> sum{0.0, 0.0};
  for (int m = 0; m < a.rows; ++m) {
    for (int k = 0; k < a.cols; ++k) {
      const double delta = m * (ev - sv) + k * (eh - sh);
      sum += std::complex<double>(std::cos(delta), std::sin(delta));
    }
  }
  double factor = std::norm(sum) / static_cast<double>(n);
  // Numerical floor for exact nulls; keeps all gains finite.
  factor = std::max(factor, 1e-12);
  return Decibel{element.value_db + 10.0 * std::log10(factor)};
}

inline Decibel sounder_gain(const SounderPattern& s, double offaxis_deg) {
  if (!(offaxis_deg >= 0.0)) {
    throw std::invalid_argument("sounder_gain: off-axis angle must be >= 0, got " +
                                std::to_string(offaxis_deg));
  }
  const double g = s.g_max_dbi - s.rolloff_coeff_db_per_deg2 * offaxis_deg * offaxis_deg;
  return Decibel{std::max(g, s.floor_dbi)};
}

}  // namespace oobemc
