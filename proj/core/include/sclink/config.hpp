#pragma once

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sclink {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Read-only view of a YAML mapping that tracks which keys were consumed.
// done() rejects any key never asked for, reporting its file:line, so typos
// fail loudly instead of silently using a default.
class ConfigView {
 public:
  ConfigView(const YAML::Node& node, std::string path, std::string file);

  bool has(const std::string& key) const;
  ConfigView map(const std::string& key);
  std::optional<ConfigView> maybe_map(const std::string& key);

  double number(const std::string& key);
  double number_or(const std::string& key, double fallback);
  std::int64_t integer(const std::string& key);
  std::int64_t integer_or(const std::string& key, std::int64_t fallback);
  std::uint64_t uinteger(const std::string& key);
  std::uint64_t uinteger_or(const std::string& key, std::uint64_t fallback);
  bool boolean_or(const std::string& key, bool fallback);
  std::string text(const std::string& key);
  std::string text_or(const std::string& key, const std::string& fallback);
  std::vector<double> number_list(const std::string& key);
  std::vector<std::string> text_list(const std::string& key);
  // sequence of [re, im] pairs
  std::vector<std::pair<double, double>> complex_list(const std::string& key);

  void done() const;

  const std::string& path() const { return path_; }
  [[noreturn]] void fail(const std::string& message) const;

 private:
  YAML::Node fetch(const std::string& key);
  [[noreturn]] void fail_at(const YAML::Node& node, const std::string& message) const;
  std::string where(const YAML::Node& node) const;

  YAML::Node node_;
  std::string path_;
  std::string file_;
  std::set<std::string> used_;
};

// Parses the file and returns the root mapping view. Empty files yield an
// empty mapping.
ConfigView load_config_file(const std::string& filename);
ConfigView parse_config_text(const std::string& text, const std::string& display_name);

}  // namespace sclink
