#pragma once

#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace kge {

// Key-value config files: one `key = value` per line, `#` comments,
// blank lines ignored. Every key mirrors a CLI flag (without the
// leading --); values from a config file take precedence over flags.
inline std::map<std::string, std::string> parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: " + path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config: " + path + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

inline void check_config_keys(const std::map<std::string, std::string>& kv,
                              const std::set<std::string>& known) {
  for (const auto& [k, v] : kv)
    if (!known.count(k))
      throw std::runtime_error("config: unknown key '" + k + "'");
}

}  // namespace kge
