#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace panelfc {

// Keyed text configuration: `key = value` lines, `#` comments, repeated
// `[section]` headers. Keys before the first header are global.
struct ConfigSection {
  std::string name;
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_long(const std::string& key) const;
  long get_long_or(const std::string& key, long fallback) const;
};

struct Config {
  ConfigSection globals;
  std::vector<ConfigSection> sections;
};

Config parse_config_file(const std::string& path);
Config parse_config_text(const std::string& text, const std::string& origin = "<config>");

}  // namespace panelfc
