#include "odmr/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "odmr/constants.hpp"

namespace odmr {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct UnitDef {
  const char* name;
  const char* dimension;
  double factor;
};

constexpr UnitDef kUnits[] = {
    {"T", "T", 1.0},
    {"mT", "T", 1e-3},
    {"uT", "T", 1e-6},
    {"nT", "T", 1e-9},
    {"GHz", "Hz", 1e9},
    {"MHz", "Hz", 1e6},
    {"kHz", "Hz", 1e3},
    {"Hz", "Hz", 1.0},
    {"GHz/T", "Hz/T", 1e9},
    {"MHz/T", "Hz/T", 1e6},
    {"kHz/T", "Hz/T", 1e3},
    {"Hz/T", "Hz/T", 1.0},
    {"deg", "rad", constants::pi / 180.0},
    {"rad", "rad", 1.0},
    {"m", "m", 1.0},
    {"mm", "m", 1e-3},
    {"um", "m", 1e-6},
    {"nm", "m", 1e-9},
    {"cm^-3", "m^-3", 1e6},
    {"m^-3", "m^-3", 1.0},
    {"%", "", 0.01},
    {"dBm", "dBm", 1.0},
    {"s", "s", 1.0},
    {"ms", "s", 1e-3},
};

}  // namespace

ConfigValue parse_quantity(const std::string& raw) {
  ConfigValue v;
  v.raw = trim(raw);
  std::istringstream is(v.raw);
  double num;
  if (!(is >> num)) {
    v.numeric = false;
    return v;
  }
  std::string unit;
  is >> unit;
  std::string extra;
  if (is >> extra) {
    throw std::runtime_error("malformed value: '" + raw + "'");
  }
  v.numeric = true;
  if (unit.empty()) {
    v.number = num;
    v.unit = "";
    return v;
  }
  for (const auto& u : kUnits) {
    if (unit == u.name) {
      v.number = num * u.factor;
      v.unit = u.dimension;
      return v;
    }
  }
  throw std::runtime_error("unknown unit '" + unit + "' in value '" + raw + "'");
}

RunConfig RunConfig::parse_string(const std::string& text) {
  RunConfig cfg;
  cfg.text_ = text;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": empty key or value");
    }
    if (cfg.entries_.count(key)) {
      throw std::runtime_error("duplicate config key: " + key);
    }
    ConfigValue cv;
    try {
      cv = parse_quantity(val);
    } catch (const std::exception& e) {
      throw std::runtime_error("config key '" + key + "': " + e.what());
    }
    if (!cv.numeric) {
      cv.raw = val;
    }
    cfg.entries_[key] = cv;
  }
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_string(os.str());
}

bool RunConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

namespace {

[[noreturn]] void fail_key(const std::string& key, const std::string& why) {
  throw std::runtime_error("config key '" + key + "': " + why);
}

}  // namespace

double RunConfig::get_tesla(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) fail_key(key, "missing");
  if (!it->second.numeric || it->second.unit != "T") {
    fail_key(key, "expected a magnetic field with unit (T, mT, uT)");
  }
  return it->second.number;
}

double RunConfig::get_tesla(const std::string& key, double fallback) const {
  return has(key) ? get_tesla(key) : fallback;
}

double RunConfig::get_hz(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) fail_key(key, "missing");
  if (!it->second.numeric || it->second.unit != "Hz") {
    fail_key(key, "expected a frequency with unit (Hz, kHz, MHz, GHz)");
  }
  return it->second.number;
}

double RunConfig::get_hz(const std::string& key, double fallback) const {
  return has(key) ? get_hz(key) : fallback;
}

double RunConfig::get_hz_per_tesla(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (!it->second.numeric || it->second.unit != "Hz/T") {
    fail_key(key, "expected a gyromagnetic ratio with unit (MHz/T, GHz/T)");
  }
  return it->second.number;
}

double RunConfig::get_rad(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) fail_key(key, "missing");
  if (!it->second.numeric || it->second.unit != "rad") {
    fail_key(key, "expected an angle with unit (deg, rad)");
  }
  return it->second.number;
}

double RunConfig::get_rad(const std::string& key, double fallback) const {
  return has(key) ? get_rad(key) : fallback;
}

double RunConfig::get_meters(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (!it->second.numeric || it->second.unit != "m") {
    fail_key(key, "expected a length with unit (m, mm, um)");
  }
  return it->second.number;
}

double RunConfig::get_per_m3(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (!it->second.numeric || it->second.unit != "m^-3") {
    fail_key(key, "expected a density with unit (cm^-3, m^-3)");
  }
  return it->second.number;
}

double RunConfig::get_number(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (!it->second.numeric || !it->second.unit.empty()) {
    fail_key(key, "expected a dimensionless number");
  }
  return it->second.number;
}

int RunConfig::get_int(const std::string& key, int fallback) const {
  const double v = get_number(key, fallback);
  if (v != std::floor(v)) fail_key(key, "expected an integer");
  return static_cast<int>(v);
}

std::string RunConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return it->second.raw;
}

std::vector<std::string> RunConfig::get_list(const std::string& key) const {
  std::vector<std::string> out;
  auto it = entries_.find(key);
  if (it == entries_.end()) return out;
  std::istringstream is(it->second.raw);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void RunConfig::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : entries_) {
    if (!allowed.count(key)) {
      throw std::runtime_error("unknown config key: " + key);
    }
  }
}

std::uint64_t RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& [key, value] : entries_) {
    mix(key);
    mix("=");
    mix(value.raw);
    mix("\n");
  }
  return h;
}

}  // namespace odmr
