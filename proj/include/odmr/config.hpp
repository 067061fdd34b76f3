#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace odmr {

// One configuration entry: either a quantity with an explicit unit, a bare
// number (counts, fractions), or a string (selectors, lists).
struct ConfigValue {
  std::string raw;       // as written
  double number = 0.0;   // SI value after unit conversion (if numeric)
  std::string unit;      // canonical dimension tag, e.g. "T", "Hz", "rad", ""
  bool numeric = false;
};

// Flat key-value run configuration with mandatory units on physical values.
// Grammar: one `key = value` per line, `#` comments, units appended to the
// number (e.g. `field_stop = 160 mT`). Unknown keys are rejected at command
// level against an allowed-key set.
class RunConfig {
 public:
  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_string(const std::string& text);

  bool has(const std::string& key) const;

  // Typed getters; throw std::runtime_error naming the key on a missing
  // entry or a dimension mismatch. Getters with a default tolerate absence.
  double get_tesla(const std::string& key) const;
  double get_tesla(const std::string& key, double fallback) const;
  double get_hz(const std::string& key) const;
  double get_hz(const std::string& key, double fallback) const;
  double get_hz_per_tesla(const std::string& key, double fallback) const;
  double get_rad(const std::string& key) const;      // accepts deg in files
  double get_rad(const std::string& key, double fallback) const;
  double get_meters(const std::string& key, double fallback) const;
  double get_per_m3(const std::string& key, double fallback) const;
  double get_number(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;  // comma split

  // Throws std::runtime_error naming the first unknown key.
  void require_known(const std::set<std::string>& allowed) const;

  const std::map<std::string, ConfigValue>& entries() const { return entries_; }
  const std::string& text() const { return text_; }

  // FNV-1a of the normalized config text, for run manifests.
  std::uint64_t hash() const;

 private:
  std::map<std::string, ConfigValue> entries_;
  std::string text_;
};

// Parses "<number> <unit>"; returns SI value and canonical dimension.
ConfigValue parse_quantity(const std::string& raw);

}  // namespace odmr
