// SPDX-License-Identifier: Apache-2.0
#include "dirsim/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "dirsim/errors.hpp"

namespace dirsim {

namespace {

struct ParamSpec {
  std::string_view name;
  Quantity quantity;
};

// Radio, antenna, MAC and scenario parameters share one namespace of names.
constexpr std::array kParams{
    ParamSpec{"transmitterPower", Quantity::Power},
    ParamSpec{"carrierFrequency", Quantity::Frequency},
    ParamSpec{"pathLossAlpha", Quantity::Number},
    ParamSpec{"pathLossModel", Quantity::Text},
    ParamSpec{"sensitivity", Quantity::Power},
    ParamSpec{"detectionThreshold", Quantity::Power},
    ParamSpec{"snirThreshold", Quantity::Gain},
    ParamSpec{"antennaHeightTx", Quantity::Length},
    ParamSpec{"antennaHeightRx", Quantity::Length},
    ParamSpec{"bitrate", Quantity::Number},
    ParamSpec{"patternType", Quantity::Text},
    ParamSpec{"beamWidth", Quantity::Angle},
    ParamSpec{"mainLobeGain", Quantity::Gain},
    ParamSpec{"sideLobeGain", Quantity::Gain},
    ParamSpec{"mainLobeOrientation", Quantity::Angle},
    ParamSpec{"dBThreshold", Quantity::Gain},
    ParamSpec{"FoliumPattern.a", Quantity::Number},
    ParamSpec{"FoliumPattern.b", Quantity::Number},
    ParamSpec{"RosePattern.k", Quantity::Number},
    ParamSpec{"CircularPattern.r", Quantity::Number},
    // MAC
    ParamSpec{"slotTime", Quantity::Time},
    ParamSpec{"sifs", Quantity::Time},
    ParamSpec{"difs", Quantity::Time},
    ParamSpec{"cwMin", Quantity::Number},
    ParamSpec{"cwMax", Quantity::Number},
    ParamSpec{"maxRetries", Quantity::Number},
    ParamSpec{"queueCapacity", Quantity::Number},
    ParamSpec{"ackBits", Quantity::Number},
    // scenarios
    ParamSpec{"duration", Quantity::Time},
    ParamSpec{"seed", Quantity::Number},
    ParamSpec{"mobilityTick", Quantity::Time},
    ParamSpec{"playgroundSizeX", Quantity::Length},
    ParamSpec{"playgroundSizeY", Quantity::Length},
    ParamSpec{"beaconInterval", Quantity::Time},
    ParamSpec{"beaconBits", Quantity::Number},
    ParamSpec{"numRings", Quantity::Number},
    ParamSpec{"ringSpacing", Quantity::Length},
    ParamSpec{"orbitPeriod", Quantity::Time},
    ParamSpec{"numRelays", Quantity::Number},
    ParamSpec{"relaySpacing", Quantity::Length},
    ParamSpec{"packetInterval", Quantity::Time},
    ParamSpec{"packetBits", Quantity::Number},
    ParamSpec{"warmup", Quantity::Time},
    ParamSpec{"numHosts", Quantity::Number},
    ParamSpec{"numAps", Quantity::Number},
    ParamSpec{"speedMin", Quantity::Number},  // m/s
    ParamSpec{"speedMax", Quantity::Number},  // m/s
    ParamSpec{"pauseTime", Quantity::Time},
    ParamSpec{"probeInterval", Quantity::Time},
    ParamSpec{"probeBits", Quantity::Number},
    ParamSpec{"repetitions", Quantity::Number},
    ParamSpec{"antennaMode", Quantity::Text},
};

constexpr std::array<std::string_view, 3> kPatternGroups{"FoliumPattern", "RosePattern", "CircularPattern"};

struct UnitSpec {
  std::string_view unit;
  Quantity quantity;
  double scale;  // multiplier to the canonical unit (ignored for dBm)
};

constexpr std::array kUnits{
    UnitSpec{"mW", Quantity::Power, 1.0},      UnitSpec{"dBm", Quantity::Power, 0.0},
    UnitSpec{"dB", Quantity::Gain, 1.0},       UnitSpec{"dBi", Quantity::Gain, 1.0},
    UnitSpec{"deg", Quantity::Angle, 1.0},     UnitSpec{"Hz", Quantity::Frequency, 1.0},
    UnitSpec{"kHz", Quantity::Frequency, 1e3}, UnitSpec{"MHz", Quantity::Frequency, 1e6},
    UnitSpec{"GHz", Quantity::Frequency, 1e9}, UnitSpec{"m", Quantity::Length, 1.0},
    UnitSpec{"s", Quantity::Time, 1.0},        UnitSpec{"ms", Quantity::Time, 1e-3},
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

const char* canonical_unit(Quantity q) {
  switch (q) {
    case Quantity::Power: return "mW";
    case Quantity::Gain: return "dB";
    case Quantity::Angle: return "deg";
    case Quantity::Frequency: return "Hz";
    case Quantity::Length: return "m";
    case Quantity::Time: return "s";
    case Quantity::Number:
    case Quantity::Text: return "";
  }
  return "";
}

// Splits "a.b.FoliumPattern.a" into profile "a.b" and parameter "FoliumPattern.a".
std::pair<std::string, std::string> split_key(std::string_view key) {
  const auto last = key.rfind('.');
  if (last == std::string_view::npos) return {kScenarioProfile, std::string(key)};
  std::size_t cut = last;
  if (last > 0) {
    const auto prev = key.rfind('.', last - 1);
    const std::string_view group =
        prev == std::string_view::npos ? key.substr(0, last) : key.substr(prev + 1, last - prev - 1);
    if (std::find(kPatternGroups.begin(), kPatternGroups.end(), group) != kPatternGroups.end()) {
      if (prev == std::string_view::npos) return {kScenarioProfile, std::string(key)};
      cut = prev;
    }
  }
  return {std::string(key.substr(0, cut)), std::string(key.substr(cut + 1))};
}

ConfigValue parse_value(std::string_view param, std::string_view raw, int line) {
  const Quantity q = parameter_quantity(param);
  ConfigValue v;
  v.quantity = q;
  if (q == Quantity::Text) {
    if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') {
      throw ConfigError(std::string(param) + " expects a quoted string", line);
    }
    v.text = std::string(raw.substr(1, raw.size() - 2));
    return v;
  }

  std::string_view digits = raw;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  double x = 0.0;
  const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), x);
  if (res.ec != std::errc{} || !std::isfinite(x)) {
    throw ConfigError("malformed number '" + std::string(raw) + "' for " + std::string(param), line);
  }
  const std::string_view unit = trim(std::string_view(res.ptr, digits.data() + digits.size() - res.ptr));

  if (unit.empty()) {
    if (q != Quantity::Number) {
      throw ConfigError(std::string(param) + " needs a " + quantity_name(q) + " unit", line);
    }
    v.number = x;
    return v;
  }
  const auto u = std::find_if(kUnits.begin(), kUnits.end(), [&](const UnitSpec& s) { return s.unit == unit; });
  if (u == kUnits.end()) throw ConfigError("unknown unit '" + std::string(unit) + "'", line);
  if (u->quantity != q) {
    throw ConfigError(std::string(param) + " is a " + quantity_name(q) + " parameter, got unit " +
                          std::string(unit),
                      line);
  }
  v.number = u->unit == "dBm" ? dbm_to_mw(PowerDbm{x}).value : x * u->scale;
  return v;
}

}  // namespace

const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::Power: return "power";
    case Quantity::Gain: return "gain";
    case Quantity::Angle: return "angle";
    case Quantity::Frequency: return "frequency";
    case Quantity::Length: return "length";
    case Quantity::Time: return "time";
    case Quantity::Number: return "number";
    case Quantity::Text: return "text";
  }
  return "?";
}

Quantity parameter_quantity(std::string_view param) {
  const auto it = std::find_if(kParams.begin(), kParams.end(), [&](const ParamSpec& p) { return p.name == param; });
  if (it == kParams.end()) throw ConfigError("unknown parameter '" + std::string(param) + "'");
  return it->quantity;
}

void ConfigDocument::add(std::string profile, std::string param, ConfigValue value, int line) {
  if (find(profile, param) != nullptr) {
    throw ConfigError("duplicate key " + profile + "." + param, static_cast<std::size_t>(line));
  }
  entries_.push_back(ConfigEntry{std::move(profile), std::move(param), std::move(value), line});
}

void ConfigDocument::set_number(const std::string& profile, const std::string& param, double v) {
  const Quantity q = parameter_quantity(param);
  if (q == Quantity::Text) throw ConfigError(param + " is a text parameter");
  for (ConfigEntry& e : entries_) {
    if (e.profile == profile && e.param == param) {
      e.value = ConfigValue{q, v, {}};
      return;
    }
  }
  entries_.push_back(ConfigEntry{profile, param, ConfigValue{q, v, {}}, 0});
}

void ConfigDocument::set_text(const std::string& profile, const std::string& param, std::string v) {
  if (parameter_quantity(param) != Quantity::Text) throw ConfigError(param + " is not a text parameter");
  for (ConfigEntry& e : entries_) {
    if (e.profile == profile && e.param == param) {
      e.value.text = std::move(v);
      return;
    }
  }
  entries_.push_back(ConfigEntry{profile, param, ConfigValue{Quantity::Text, 0.0, std::move(v)}, 0});
}

const ConfigValue* ConfigDocument::find(std::string_view profile, std::string_view param) const {
  for (const ConfigEntry& e : entries_) {
    if (e.profile == profile && e.param == param) return &e.value;
  }
  return nullptr;
}

double ConfigDocument::number(std::string_view profile, std::string_view param, double fallback) const {
  const ConfigValue* v = find(profile, param);
  return v == nullptr ? fallback : v->number;
}

std::string ConfigDocument::text(std::string_view profile, std::string_view param, std::string fallback) const {
  const ConfigValue* v = find(profile, param);
  return v == nullptr ? fallback : v->text;
}

std::vector<std::string> ConfigDocument::radio_profiles() const {
  std::vector<std::string> out;
  for (const ConfigEntry& e : entries_) {
    if (e.profile != kScenarioProfile && std::find(out.begin(), out.end(), e.profile) == out.end()) {
      out.push_back(e.profile);
    }
  }
  return out;
}

bool ConfigDocument::has_profile(std::string_view profile) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const ConfigEntry& e) { return e.profile == profile; });
}

bool operator==(const ConfigDocument& a, const ConfigDocument& b) {
  return std::equal(a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
                    [](const ConfigEntry& x, const ConfigEntry& y) {
                      return x.profile == y.profile && x.param == y.param && x.value == y.value;
                    });
}

ConfigDocument parse_config(std::string_view text) {
  ConfigDocument doc;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.starts_with("**.")) key.remove_prefix(3);
    if (key.empty() || value.empty() || key.front() == '.' || key.back() == '.' ||
        key.find_first_of(" \t*=") != std::string_view::npos) {
      throw ConfigError("malformed line", line_no);
    }
    auto [profile, param] = split_key(key);
    try {
      ConfigValue v = parse_value(param, value, line_no);
      doc.add(std::move(profile), std::move(param), std::move(v), line_no);
    } catch (const ConfigError& e) {
      if (e.line() != 0) throw;
      throw ConfigError(e.what(), line_no);
    }
  }
  return doc;
}

ConfigDocument load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ConfigDocument& doc, std::string_view line_prefix) {
  std::string out;
  for (const ConfigEntry& e : doc.entries()) {
    out += line_prefix;
    out += e.key();
    out += " = ";
    if (e.value.quantity == Quantity::Text) {
      out += '"' + e.value.text + '"';
    } else {
      out += format_number(e.value.number);
      out += canonical_unit(e.value.quantity);
    }
    out += '\n';
  }
  return out;
}

namespace {

PathLossModel path_loss_model_from(const std::string& name) {
  if (name == "FreeSpace") return PathLossModel::FreeSpace;
  if (name == "TwoRay") return PathLossModel::TwoRay;
  throw ConfigError("unknown pathLossModel \"" + name + "\" (FreeSpace or TwoRay)");
}

constexpr std::array<std::string_view, 9> kAntennaKeys{
    "beamWidth",       "mainLobeGain",    "sideLobeGain",  "mainLobeOrientation", "dBThreshold",
    "FoliumPattern.a", "FoliumPattern.b", "RosePattern.k", "CircularPattern.r"};

}  // namespace

RadioConfig radio_config_from(const ConfigDocument& doc, std::string_view profile, const RadioConfig& base) {
  RadioConfig c = base;
  auto num = [&](std::string_view key, double fallback) { return doc.number(profile, key, fallback); };
  c.transmitter_power_mw = num("transmitterPower", c.transmitter_power_mw);
  c.carrier_frequency_hz = num("carrierFrequency", c.carrier_frequency_hz);
  c.path_loss_alpha = num("pathLossAlpha", c.path_loss_alpha);
  if (const ConfigValue* v = doc.find(profile, "sensitivity")) c.sensitivity_dbm = mw_to_dbm(PowerMw{v->number}).value;
  if (const ConfigValue* v = doc.find(profile, "detectionThreshold")) {
    c.detection_threshold_dbm = mw_to_dbm(PowerMw{v->number}).value;
  }
  c.snir_threshold_db = num("snirThreshold", c.snir_threshold_db);
  c.antenna_height_tx_m = num("antennaHeightTx", c.antenna_height_tx_m);
  c.antenna_height_rx_m = num("antennaHeightRx", c.antenna_height_rx_m);
  c.bitrate_bps = num("bitrate", c.bitrate_bps);
  if (const ConfigValue* v = doc.find(profile, "pathLossModel")) c.path_loss_model = path_loss_model_from(v->text);

  const std::string type = doc.text(profile, "patternType", base.antenna ? pattern_type_name(base.antenna->family) : "Omni");
  if (type == "Omni") {
    for (std::string_view k : kAntennaKeys) {
      if (doc.find(profile, k) != nullptr) {
        throw ConfigError(std::string(profile) + "." + std::string(k) + " given without a directional patternType");
      }
    }
    c.antenna.reset();
  } else {
    AntennaPatternConfig a = base.antenna.value_or(AntennaPatternConfig{});
    a.beam_width_deg = num("beamWidth", a.beam_width_deg);
    a.main_lobe_gain_db = num("mainLobeGain", a.main_lobe_gain_db);
    a.side_lobe_gain_db = num("sideLobeGain", a.side_lobe_gain_db);
    a.main_lobe_orientation_deg = num("mainLobeOrientation", a.main_lobe_orientation_deg);
    a.threshold_db = num("dBThreshold", a.threshold_db);
    if (type == "FoliumPattern") {
      const auto* f = std::get_if<FoliumCurve>(&a.family);
      const FoliumCurve d = f != nullptr ? *f : FoliumCurve{};
      a.family = FoliumCurve{num("FoliumPattern.a", d.a), num("FoliumPattern.b", d.b)};
    } else if (type == "RosePattern") {
      const auto* r = std::get_if<RoseCurve>(&a.family);
      const double k = num("RosePattern.k", r != nullptr ? r->k : 1);
      if (k != std::floor(k) || k < 1.0 || k > 1e6) throw ConfigError("RosePattern.k must be a positive integer");
      a.family = RoseCurve{static_cast<int>(k)};
    } else if (type == "CircularPattern") {
      const auto* ci = std::get_if<CircleCurve>(&a.family);
      a.family = CircleCurve{num("CircularPattern.r", ci != nullptr ? ci->radius : 1.0)};
    } else if (type == "CardioidPattern") {
      a.family = CardioidCurve{};
    } else {
      throw ConfigError("unknown patternType \"" + type + "\"");
    }
    c.antenna = a;
  }
  c.validate();
  if (c.antenna) AntennaPattern check(*c.antenna);
  return c;
}

void append_radio_config(ConfigDocument& doc, const std::string& profile, const RadioConfig& c) {
  doc.set_number(profile, "transmitterPower", c.transmitter_power_mw);
  doc.set_number(profile, "carrierFrequency", c.carrier_frequency_hz);
  doc.set_number(profile, "pathLossAlpha", c.path_loss_alpha);
  doc.set_text(profile, "pathLossModel", c.path_loss_model == PathLossModel::TwoRay ? "TwoRay" : "FreeSpace");
  doc.set_number(profile, "sensitivity", dbm_to_mw(PowerDbm{c.sensitivity_dbm}).value);
  doc.set_number(profile, "detectionThreshold", dbm_to_mw(PowerDbm{c.detection_threshold_dbm}).value);
  doc.set_number(profile, "snirThreshold", c.snir_threshold_db);
  doc.set_number(profile, "antennaHeightTx", c.antenna_height_tx_m);
  doc.set_number(profile, "antennaHeightRx", c.antenna_height_rx_m);
  doc.set_number(profile, "bitrate", c.bitrate_bps);
  if (!c.antenna) {
    doc.set_text(profile, "patternType", "Omni");
    return;
  }
  const AntennaPatternConfig& a = *c.antenna;
  doc.set_text(profile, "patternType", pattern_type_name(a.family));
  doc.set_number(profile, "beamWidth", a.beam_width_deg);
  doc.set_number(profile, "mainLobeGain", a.main_lobe_gain_db);
  doc.set_number(profile, "sideLobeGain", a.side_lobe_gain_db);
  doc.set_number(profile, "mainLobeOrientation", a.main_lobe_orientation_deg);
  doc.set_number(profile, "dBThreshold", a.threshold_db);
  if (const auto* f = std::get_if<FoliumCurve>(&a.family)) {
    doc.set_number(profile, "FoliumPattern.a", f->a);
    doc.set_number(profile, "FoliumPattern.b", f->b);
  } else if (const auto* r = std::get_if<RoseCurve>(&a.family)) {
    doc.set_number(profile, "RosePattern.k", r->k);
  } else if (const auto* ci = std::get_if<CircleCurve>(&a.family)) {
    doc.set_number(profile, "CircularPattern.r", ci->radius);
  }
}

}  // namespace dirsim
