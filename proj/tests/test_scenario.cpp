#include <catch_amalgamated.hpp>

#include <string>

#include "oobemc/scenario.hpp"

using namespace oobemc;

namespace {

std::string validation_message(const Scenario& s) {
  try {
    s.validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("the default scenario is valid") {
  CHECK_NOTHROW(Scenario{}.validate());
}

TEST_CASE("validation names the offending field") {
  Scenario s;
  s.repeater_factor_f = -1;
  CHECK(validation_message(s).find("repeater_factor_f") != std::string::npos);

  Scenario t;
  t.tdd_downlink_fraction = 1.5;
  CHECK(validation_message(t).find("tdd_downlink_fraction") != std::string::npos);

  Scenario u;
  u.network_loading = -0.25;
  CHECK(validation_message(u).find("network_loading") != std::string::npos);

  Scenario v;
  v.power_control.alpha = 1.5;
  CHECK(validation_message(v).find("power_control.alpha") != std::string::npos);

  Scenario w;
  w.antenna_ue.rows = 0;
  CHECK(validation_message(w).find("antennas.ue.rows") != std::string::npos);

  Scenario x;
  x.trials = 0;
  CHECK(validation_message(x).find("trials") != std::string::npos);

  Scenario y;
  y.geometry.elevation_deg = 0.0;  // grazing path excluded
  CHECK(validation_message(y).find("geometry.elevation_deg") != std::string::npos);
}

TEST_CASE("per-kind lookups route to the matching class config") {
  Scenario s;
  s.l_other_gnb_db = 1.0;
  s.l_other_repeater_db = 2.0;
  s.l_other_ue_db = 3.0;
  CHECK(s.l_other_db(EmitterKind::kGnb) == 1.0);
  CHECK(s.l_other_db(EmitterKind::kRepeaterDown) == 2.0);
  CHECK(s.l_other_db(EmitterKind::kRepeaterUp) == 2.0);
  CHECK(s.l_other_db(EmitterKind::kUe) == 3.0);

  CHECK(&s.antenna(EmitterKind::kGnb) == &s.antenna_gnb);
  CHECK(&s.antenna(EmitterKind::kRepeaterDown) == &s.antenna_repeater);
  CHECK(&s.antenna(EmitterKind::kRepeaterUp) == &s.antenna_repeater);
  CHECK(&s.antenna(EmitterKind::kUe) == &s.antenna_ue);
}

TEST_CASE("class OOBE limits rescale into the reference bandwidth") {
  Scenario s;  // limits -70 dBm / 10 kHz, reference 200 MHz
  const DecibelPower gnb = assign_oobe_trp(EmitterKind::kGnb, s);
  CHECK(gnb.dbm == Catch::Approx(-26.989700043360187).margin(1e-12));
  CHECK(gnb.ref_bandwidth_hz == 200e6);
  const DecibelPower rep = assign_oobe_trp(EmitterKind::kRepeaterDown, s);
  CHECK(rep.dbm == gnb.dbm);  // repeaters share the gNB-grade limit by default
  const DecibelPower ue = assign_oobe_trp(EmitterKind::kUe, s);
  CHECK(ue.dbm == gnb.dbm);
}

TEST_CASE("UE OOBE offset mode anchors to the subclass maximum power") {
  Scenario s;
  s.ue_oobe_offset_db = 48.99;
  const DecibelPower normal = assign_oobe_trp(EmitterKind::kUe, s, /*high_power=*/false);
  CHECK(normal.dbm == Catch::Approx(22.0 - 48.99).margin(1e-12));
  CHECK(normal.ref_bandwidth_hz == 200e6);
  const DecibelPower high = assign_oobe_trp(EmitterKind::kUe, s, /*high_power=*/true);
  CHECK(high.dbm == Catch::Approx(40.0 - 48.99).margin(1e-12));
}

TEST_CASE("high-power subclass swaps in its own cap and control switch") {
  Scenario s;
  const PowerControlConfig normal = s.power_control_for(false);
  CHECK(normal.enabled);
  CHECK(normal.p_max_dbm == 22.0);

  const PowerControlConfig high = s.power_control_for(true);
  CHECK_FALSE(high.enabled);  // fixed-wireless gear defaults to no backoff
  CHECK(high.p_max_dbm == 40.0);
  CHECK(high.p0_dbm == normal.p0_dbm);
  CHECK(high.p_min_dbm == normal.p_min_dbm);
}

TEST_CASE("default geometry and radio parameters are pinned") {
  const Scenario s;
  CHECK(s.geometry.altitude_km == 824.0);
  CHECK(s.geometry.elevation_deg == 90.0);
  CHECK(s.geometry.footprint_radius_km == 25.0);
  CHECK(s.frequency_hz == 23.8e9);
  CHECK(s.ref_bandwidth_hz == 200e6);
  CHECK(s.oobe_limit_gnb.dbm == -70.0);
  CHECK(s.oobe_limit_gnb.ref_bandwidth_hz == 10e3);
  CHECK(s.trials == 1000);
  CHECK(s.duplex_mode == DuplexMode::kDownstream);
  CHECK(s.oobe_correlation == OobeCorrelation::kUncorrelated);
}
