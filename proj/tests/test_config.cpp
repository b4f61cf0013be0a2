// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "dirsim/config.hpp"
#include "dirsim/errors.hpp"

using namespace dirsim;

namespace {

constexpr const char* kApExcerpt = R"(# Antenna Pattern Parameters
**.ap1.wlan.radio.transmitterPower = 40.0mW
**.ap1.wlan.radio.beamWidth = 40deg
**.ap1.wlan.radio.mainLobeGain = 15dB
**.ap1.wlan.radio.sideLobeGain = -5dBi
**.ap1.wlan.radio.mainLobeOrientation = 90deg
**.ap1.wlan.radio.dBThreshold = 3dB
# Folium Pattern
**.ap1.wlan.radio.patternType = "FoliumPattern"
**.ap1.wlan.radio.FoliumPattern.a = 1
**.ap1.wlan.radio.FoliumPattern.b = 3
)";

std::size_t error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("values with units") {
  const ConfigDocument d = parse_config(
      "beamWidth = 40deg\n"
      "sideLobeGain = -5dBi\n"
      "x.transmitterPower = 40.0mW\n"
      "y.transmitterPower = 0dBm\n"
      "x.carrierFrequency = 2.4GHz\n"
      "y.carrierFrequency = 900MHz\n"
      "packetInterval = 5ms\n"
      "ringSpacing = 10m\n"
      "x.pathLossAlpha = 2.5\n");
  CHECK(d.find("scenario", "beamWidth")->number == 40.0);
  CHECK(d.find("scenario", "beamWidth")->quantity == Quantity::Angle);
  CHECK(d.number("scenario", "sideLobeGain", 0.0) == -5.0);
  CHECK(d.number("x", "transmitterPower", 0.0) == 40.0);
  CHECK(d.number("y", "transmitterPower", 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.number("x", "carrierFrequency", 0.0) == 2.4e9);
  CHECK(d.number("y", "carrierFrequency", 0.0) == 9e8);
  CHECK(d.number("scenario", "packetInterval", 0.0) == doctest::Approx(0.005));
  CHECK(d.number("scenario", "ringSpacing", 0.0) == 10.0);
  CHECK(d.number("x", "pathLossAlpha", 0.0) == 2.5);
}

TEST_CASE("unit mismatches are rejected") {
  CHECK_THROWS_AS(parse_config("transmitterPower = 40.0dB"), ConfigError);
  CHECK_THROWS_AS(parse_config("beamWidth = 40"), ConfigError);
  CHECK_THROWS_AS(parse_config("beamWidth = 40m"), ConfigError);
  CHECK_THROWS_AS(parse_config("beamWidth = 40rad"), ConfigError);
  CHECK_THROWS_AS(parse_config("a.FoliumPattern.a = 1deg"), ConfigError);
  CHECK_THROWS_AS(parse_config("a.patternType = Folium"), ConfigError);
  CHECK_THROWS_AS(parse_config("a.noSuchKey = 3"), ConfigError);
}

TEST_CASE("errors carry the line number") {
  CHECK(error_line("beamWidth = 40deg\n\n# c\ntransmitterPower = 40.0dB\n") == 4);
  CHECK(error_line("beamWidth = 40deg\nbeamWidth = 41deg\n") == 2);
  CHECK(error_line("# header\njust some words\n") == 2);
  CHECK(error_line("beamWidth = 4x0deg\n") == 1);
  CHECK(error_line("x.sensitivity = -85dBmm\n") == 1);
  CHECK(error_line(" = 3\n") == 1);
  CHECK(error_line("beamWidth =\n") == 1);
  try {
    parse_config("a = 1\nbeamWidth = 40\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 1") == 0);
  }
}

TEST_CASE("wildcard prefixes collapse to one profile") {
  const ConfigDocument d = parse_config(kApExcerpt);
  CHECK(d.radio_profiles() == std::vector<std::string>{"ap1.wlan.radio"});
  CHECK(d.find("ap1.wlan.radio", "FoliumPattern.a")->number == 1.0);
  CHECK(d.text("ap1.wlan.radio", "patternType", "") == "FoliumPattern");
  CHECK_THROWS_AS(parse_config("**.a.beamWidth = 40deg\na.beamWidth = 40deg\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("a.*.beamWidth = 40deg\n"), ConfigError);
}

TEST_CASE("radio config from the access point excerpt") {
  const RadioConfig r = radio_config_from(parse_config(kApExcerpt), "ap1.wlan.radio");
  CHECK(r.transmitter_power_mw == 40.0);
  REQUIRE(r.antenna.has_value());
  CHECK(r.antenna->beam_width_deg == 40.0);
  CHECK(r.antenna->main_lobe_gain_db == 15.0);
  CHECK(r.antenna->side_lobe_gain_db == -5.0);
  CHECK(r.antenna->main_lobe_orientation_deg == 90.0);
  CHECK(r.antenna->threshold_db == 3.0);
  CHECK(r.antenna->family == CurveFamily{FoliumCurve{1.0, 3.0}});
}

TEST_CASE("radio config details") {
  SUBCASE("dBm thresholds") {
    const RadioConfig r = radio_config_from(parse_config("h.sensitivity = -80dBm\nh.detectionThreshold = -90dBm\n"), "h");
    CHECK(r.sensitivity_dbm == doctest::Approx(-80.0).epsilon(1e-12));
    CHECK(r.detection_threshold_dbm == doctest::Approx(-90.0).epsilon(1e-12));
    CHECK_FALSE(r.antenna.has_value());
  }
  SUBCASE("base values fill the gaps") {
    RadioConfig base;
    base.bitrate_bps = 2e6;
    const RadioConfig r = radio_config_from(parse_config("h.transmitterPower = 5mW\n"), "h", base);
    CHECK(r.bitrate_bps == 2e6);
    CHECK(r.transmitter_power_mw == 5.0);
  }
  SUBCASE("rose and circle") {
    const RadioConfig r = radio_config_from(parse_config("h.patternType = \"RosePattern\"\nh.RosePattern.k = 2\n"), "h");
    CHECK(r.antenna->family == CurveFamily{RoseCurve{2}});
    CHECK_THROWS_AS(radio_config_from(parse_config("h.patternType = \"RosePattern\"\nh.RosePattern.k = 1.5\n"), "h"),
                    ConfigError);
    const RadioConfig c =
        radio_config_from(parse_config("h.patternType = \"CircularPattern\"\nh.CircularPattern.r = 2\n"), "h");
    CHECK(c.antenna->family == CurveFamily{CircleCurve{2.0}});
  }
  SUBCASE("antenna keys need a directional pattern") {
    CHECK_THROWS_AS(radio_config_from(parse_config("h.beamWidth = 30deg\n"), "h"), ConfigError);
    CHECK_THROWS_AS(radio_config_from(parse_config("h.patternType = \"Spiral\"\n"), "h"), ConfigError);
  }
  SUBCASE("invalid values") {
    CHECK_THROWS_AS(radio_config_from(parse_config("h.sensitivity = -95dBm\nh.detectionThreshold = -90dBm\n"), "h"),
                    ConfigError);
    CHECK_THROWS_AS(
        radio_config_from(parse_config("h.patternType = \"FoliumPattern\"\nh.mainLobeGain = -6dB\n"), "h"),
        ConfigError);
    CHECK_THROWS_AS(radio_config_from(parse_config("h.pathLossModel = \"Hata\"\n"), "h"), ConfigError);
  }
}

TEST_CASE("serialization round trips") {
  const ConfigDocument d = parse_config(kApExcerpt);
  const std::string text = serialize_config(d);
  CHECK(text.find("ap1.wlan.radio.beamWidth = 40deg\n") != std::string::npos);
  CHECK(text.find("ap1.wlan.radio.patternType = \"FoliumPattern\"\n") != std::string::npos);
  CHECK(parse_config(text) == d);
  CHECK(serialize_config(parse_config(text)) == text);
  CHECK(serialize_config(d, "# ").rfind("# ", 0) == 0);

  // Every radio field written out reads back unchanged.
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    RadioConfig r;
    r.transmitter_power_mw = std::pow(10.0, 4.0 * u(rng) - 2.0);
    r.carrier_frequency_hz = 1e9 + 5e9 * u(rng);
    r.path_loss_alpha = 2.0 + 2.0 * u(rng);
    r.detection_threshold_dbm = -110.0 + 20.0 * u(rng);
    r.sensitivity_dbm = r.detection_threshold_dbm + 10.0 * u(rng);
    r.snir_threshold_db = 10.0 * u(rng);
    r.path_loss_model = i % 3 == 0 ? PathLossModel::TwoRay : PathLossModel::FreeSpace;
    if (i % 2 == 0) {
      AntennaPatternConfig a;
      a.beam_width_deg = 10.0 + 100.0 * u(rng);
      a.main_lobe_orientation_deg = 360.0 * u(rng);
      a.family = i % 4 == 0 ? CurveFamily{RoseCurve{1 + i % 3}} : CurveFamily{FoliumCurve{u(rng) + 0.1, u(rng) + 1.0}};
      r.antenna = a;
    }
    ConfigDocument doc;
    append_radio_config(doc, "node", r);
    const ConfigDocument back = parse_config(serialize_config(doc));
    REQUIRE(back == doc);
    const RadioConfig r2 = radio_config_from(back, "node");
    REQUIRE(r2.transmitter_power_mw == r.transmitter_power_mw);
    REQUIRE(r2.antenna == r.antenna);
    REQUIRE(r2.path_loss_model == r.path_loss_model);
    REQUIRE(std::abs(r2.sensitivity_dbm - r.sensitivity_dbm) < 1e-9);
  }
}

TEST_CASE("document editing") {
  ConfigDocument d;
  d.set_number("scenario", "duration", 5.0);
  d.set_number("scenario", "duration", 7.0);
  d.set_text("scenario", "antennaMode", "omni");
  CHECK(d.entries().size() == 2);
  CHECK(d.number("scenario", "duration", 0.0) == 7.0);
  CHECK(d.number("scenario", "seed", 3.0) == 3.0);
  CHECK_THROWS_AS(d.set_text("scenario", "duration", "x"), ConfigError);
  CHECK_THROWS_AS(d.set_number("scenario", "antennaMode", 1.0), ConfigError);
  CHECK(d.radio_profiles().empty());
  CHECK(d.has_profile("scenario"));
  CHECK_THROWS_AS(load_config_file("/nonexistent/dir/file.ini"), ConfigError);
}
