#include "panelfc/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace panelfc {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::string ConfigSection::get(const std::string& key) const {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    throw std::invalid_argument("config: missing key '" + key + "' in [" + name + "]");
  }
  return it->second;
}

std::string ConfigSection::get_or(const std::string& key, const std::string& fallback) const {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double ConfigSection::get_double(const std::string& key) const {
  const std::string s = get(key);
  double v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw std::invalid_argument("config: key '" + key + "' is not a number: " + s);
  }
  return v;
}

double ConfigSection::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long ConfigSection::get_long(const std::string& key) const {
  const double v = get_double(key);
  const long l = static_cast<long>(v);
  if (static_cast<double>(l) != v) {
    throw std::invalid_argument("config: key '" + key + "' is not an integer");
  }
  return l;
}

long ConfigSection::get_long_or(const std::string& key, long fallback) const {
  return has(key) ? get_long(key) : fallback;
}

Config parse_config_text(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.globals.name = "";
  ConfigSection* current = &cfg.globals;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument(origin + ": line " + std::to_string(line_no) +
                                    ": malformed section header");
      }
      cfg.sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
      current = &cfg.sections.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(origin + ": line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument(origin + ": line " + std::to_string(line_no) + ": empty key");
    }
    current->kv[key] = value;
  }
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace panelfc
