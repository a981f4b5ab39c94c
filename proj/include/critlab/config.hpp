#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace critlab {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/*
 * One `key = value` per line, `#` starts a comment, dotted keys for nesting,
 * lists as comma-separated values. Keys keep their insertion order so a dump
 * re-parses to an identical document; duplicate keys are rejected.
 */
class RunConfig {
 public:
  RunConfig() = default;
  static RunConfig parse_string(const std::string& text);
  static RunConfig parse_file(const std::string& path);

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int_or(const std::string& key, long fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;

  // Insert or overwrite, preserving first-insertion order.
  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_int(const std::string& key, long value);

  const std::vector<std::pair<std::string, std::string>>& items() const {
    return items_;
  }
  std::string dump() const;

  // Every key must appear in `known` (exact match); unknown keys are errors.
  void require_known_keys(const std::vector<std::string>& known) const;

  bool operator==(const RunConfig& other) const { return items_ == other.items_; }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace critlab
