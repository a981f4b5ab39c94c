#include "critlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace critlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": cannot parse number from '" + value + "'");
  }
}

}  // namespace

RunConfig RunConfig::parse_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (cfg.index_.count(key))
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key " +
                        key);
    cfg.index_[key] = cfg.items_.size();
    cfg.items_.emplace_back(key, value);
  }
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

bool RunConfig::has(const std::string& key) const { return index_.count(key) > 0; }

const std::string& RunConfig::get(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) throw ConfigError("missing config key: " + key);
  return items_[it->second].second;
}

std::string RunConfig::get_or(const std::string& key,
                              const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

double RunConfig::get_double(const std::string& key) const {
  return parse_double(key, get(key));
}

double RunConfig::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long RunConfig::get_int(const std::string& key) const {
  const std::string& v = get(key);
  try {
    std::size_t pos = 0;
    long n = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return n;
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": cannot parse integer from '" + v + "'");
  }
}

long RunConfig::get_int_or(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool RunConfig::get_bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = get(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("key " + key + ": expected true/false, got '" + v + "'");
}

std::vector<std::string> RunConfig::get_list(const std::string& key) const {
  const std::string& v = get(key);
  std::vector<std::string> out;
  std::string item;
  int depth = 0;
  // Commas inside parentheses belong to the item (criterion tokens carry
  // their own argument lists).
  for (char ch : v) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += ch;
    }
  }
  item = trim(item);
  if (!item.empty()) out.push_back(item);
  if (out.empty()) throw ConfigError("key " + key + ": empty list");
  return out;
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : get_list(key)) out.push_back(parse_double(key, item));
  return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = index_.find(key);
  if (it != index_.end()) {
    items_[it->second].second = value;
    return;
  }
  index_[key] = items_.size();
  items_.emplace_back(key, value);
}

void RunConfig::set_double(const std::string& key, double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  if (std::strtod(buf, nullptr) != value)
    std::snprintf(buf, sizeof(buf), "%.17g", value);
  set(key, buf);
}

void RunConfig::set_int(const std::string& key, long value) {
  set(key, std::to_string(value));
}

std::string RunConfig::dump() const {
  std::string out;
  for (const auto& [k, v] : items_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

void RunConfig::require_known_keys(const std::vector<std::string>& known) const {
  for (const auto& [k, v] : items_) {
    (void)v;
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw ConfigError("unknown config key: " + k);
  }
}

}  // namespace critlab
