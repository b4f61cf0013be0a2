// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dirsim/propagation.hpp"

namespace dirsim {

/// Physical kind of a parameter. Numbers are stored in the canonical unit
/// of their kind: mW, dB, degrees, Hz, m, s.
enum class Quantity { Power, Gain, Angle, Frequency, Length, Time, Number, Text };

const char* quantity_name(Quantity q);

/// Kind of a known parameter name. Throws ConfigError for unknown names.
Quantity parameter_quantity(std::string_view param);

struct ConfigValue {
  Quantity quantity = Quantity::Number;
  double number = 0.0;
  std::string text;

  friend bool operator==(const ConfigValue&, const ConfigValue&) = default;
};

struct ConfigEntry {
  std::string profile;  // dotted prefix, "scenario" when absent
  std::string param;    // e.g. beamWidth, FoliumPattern.a
  ConfigValue value;
  int line = 0;

  std::string key() const { return profile + "." + param; }
};

inline constexpr const char* kScenarioProfile = "scenario";

/// Parameters in file order. Keys are unique.
class ConfigDocument {
 public:
  void add(std::string profile, std::string param, ConfigValue value, int line = 0);
  void set_number(const std::string& profile, const std::string& param, double v);
  void set_text(const std::string& profile, const std::string& param, std::string v);

  const ConfigValue* find(std::string_view profile, std::string_view param) const;
  double number(std::string_view profile, std::string_view param, double fallback) const;
  std::string text(std::string_view profile, std::string_view param, std::string fallback) const;

  const std::vector<ConfigEntry>& entries() const { return entries_; }
  /// Distinct profile names in order of first appearance, excluding the scenario section.
  std::vector<std::string> radio_profiles() const;
  bool has_profile(std::string_view profile) const;

  /// Entry-wise equality ignoring line numbers.
  friend bool operator==(const ConfigDocument& a, const ConfigDocument& b);

 private:
  std::vector<ConfigEntry> entries_;
};

/// Parses `key = value` lines. A leading `**.` on keys is stripped.
ConfigDocument parse_config(std::string_view text);
ConfigDocument load_config_file(const std::string& path);

/// Canonical text, one entry per line, each line prefixed by `line_prefix`.
std::string serialize_config(const ConfigDocument& doc, std::string_view line_prefix = "");

/// Builds a RadioConfig from a profile; keys missing from the profile keep
/// their value in `base`. Validates the result.
RadioConfig radio_config_from(const ConfigDocument& doc, std::string_view profile, const RadioConfig& base = {});

/// Writes every field of `config` (defaults included) under `profile`.
void append_radio_config(ConfigDocument& doc, const std::string& profile, const RadioConfig& config);

}  // namespace dirsim
