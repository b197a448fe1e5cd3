#include "sclink/config.hpp"

#include <fstream>
#include <sstream>

namespace sclink {

namespace {

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

}  // namespace

ConfigView::ConfigView(const YAML::Node& node, std::string path, std::string file)
    : node_(node), path_(std::move(path)), file_(std::move(file)) {
  if (node_ && !node_.IsNull() && !node_.IsMap()) {
    fail_at(node_, "expected a mapping at '" + (path_.empty() ? std::string("<root>") : path_) + "'");
  }
}

std::string ConfigView::where(const YAML::Node& node) const {
  const YAML::Mark mark = node.Mark();
  std::ostringstream os;
  os << file_;
  if (mark.line >= 0) os << ":" << (mark.line + 1);
  return os.str();
}

void ConfigView::fail_at(const YAML::Node& node, const std::string& message) const {
  throw ConfigError(where(node) + ": " + message);
}

void ConfigView::fail(const std::string& message) const {
  if (node_) fail_at(node_, message);
  throw ConfigError(file_ + ": " + message);
}

bool ConfigView::has(const std::string& key) const {
  return node_ && node_.IsMap() && static_cast<bool>(node_[key]);
}

YAML::Node ConfigView::fetch(const std::string& key) {
  used_.insert(key);
  if (!has(key)) {
    fail("missing required key '" + join_path(path_, key) + "'");
  }
  return node_[key];
}

ConfigView ConfigView::map(const std::string& key) {
  YAML::Node child = fetch(key);
  if (!child.IsMap() && !child.IsNull()) {
    fail_at(child, "'" + join_path(path_, key) + "' must be a mapping");
  }
  return ConfigView(child, join_path(path_, key), file_);
}

std::optional<ConfigView> ConfigView::maybe_map(const std::string& key) {
  used_.insert(key);
  if (!has(key)) return std::nullopt;
  return map(key);
}

double ConfigView::number(const std::string& key) {
  YAML::Node child = fetch(key);
  try {
    return child.as<double>();
  } catch (const YAML::Exception&) {
    fail_at(child, "'" + join_path(path_, key) + "' must be a number");
  }
}

double ConfigView::number_or(const std::string& key, double fallback) {
  used_.insert(key);
  if (!has(key)) return fallback;
  return number(key);
}

std::int64_t ConfigView::integer(const std::string& key) {
  YAML::Node child = fetch(key);
  try {
    return child.as<std::int64_t>();
  } catch (const YAML::Exception&) {
    fail_at(child, "'" + join_path(path_, key) + "' must be an integer");
  }
}

std::int64_t ConfigView::integer_or(const std::string& key, std::int64_t fallback) {
  used_.insert(key);
  if (!has(key)) return fallback;
  return integer(key);
}

std::uint64_t ConfigView::uinteger(const std::string& key) {
  const std::int64_t v = integer(key);
  if (v < 0) fail("'" + join_path(path_, key) + "' must be non-negative");
  return static_cast<std::uint64_t>(v);
}

std::uint64_t ConfigView::uinteger_or(const std::string& key, std::uint64_t fallback) {
  used_.insert(key);
  if (!has(key)) return fallback;
  return uinteger(key);
}

bool ConfigView::boolean_or(const std::string& key, bool fallback) {
  used_.insert(key);
  if (!has(key)) return fallback;
  YAML::Node child = fetch(key);
  try {
    return child.as<bool>();
  } catch (const YAML::Exception&) {
    fail_at(child, "'" + join_path(path_, key) + "' must be true or false");
  }
}

std::string ConfigView::text(const std::string& key) {
  YAML::Node child = fetch(key);
  try {
    return child.as<std::string>();
  } catch (const YAML::Exception&) {
    fail_at(child, "'" + join_path(path_, key) + "' must be a string");
  }
}

std::string ConfigView::text_or(const std::string& key, const std::string& fallback) {
  used_.insert(key);
  if (!has(key)) return fallback;
  return text(key);
}

std::vector<double> ConfigView::number_list(const std::string& key) {
  YAML::Node child = fetch(key);
  if (!child.IsSequence()) {
    fail_at(child, "'" + join_path(path_, key) + "' must be a list of numbers");
  }
  std::vector<double> out;
  out.reserve(child.size());
  for (const auto& item : child) {
    try {
      out.push_back(item.as<double>());
    } catch (const YAML::Exception&) {
      fail_at(item, "'" + join_path(path_, key) + "' entries must be numbers");
    }
  }
  return out;
}

std::vector<std::string> ConfigView::text_list(const std::string& key) {
  YAML::Node child = fetch(key);
  if (!child.IsSequence()) {
    fail_at(child, "'" + join_path(path_, key) + "' must be a list of strings");
  }
  std::vector<std::string> out;
  out.reserve(child.size());
  for (const auto& item : child) {
    try {
      out.push_back(item.as<std::string>());
    } catch (const YAML::Exception&) {
      fail_at(item, "'" + join_path(path_, key) + "' entries must be strings");
    }
  }
  return out;
}

std::vector<std::pair<double, double>> ConfigView::complex_list(const std::string& key) {
  YAML::Node child = fetch(key);
  if (!child.IsSequence()) {
    fail_at(child, "'" + join_path(path_, key) + "' must be a list of [re, im] pairs");
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(child.size());
  for (const auto& item : child) {
    if (!item.IsSequence() || item.size() != 2) {
      fail_at(item, "'" + join_path(path_, key) + "' entries must be [re, im] pairs");
    }
    try {
      out.emplace_back(item[0].as<double>(), item[1].as<double>());
    } catch (const YAML::Exception&) {
      fail_at(item, "'" + join_path(path_, key) + "' entries must be numeric pairs");
    }
  }
  return out;
}

void ConfigView::done() const {
  if (!node_ || !node_.IsMap()) return;
  for (const auto& item : node_) {
    std::string key;
    try {
      key = item.first.as<std::string>();
    } catch (const YAML::Exception&) {
      fail_at(item.first, "non-scalar key in '" + (path_.empty() ? std::string("<root>") : path_) + "'");
    }
    if (used_.find(key) == used_.end()) {
      fail_at(item.first, "unknown key '" + join_path(path_, key) + "'");
    }
  }
}

ConfigView load_config_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw ConfigError("cannot open config file '" + filename + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), filename);
}

ConfigView parse_config_text(const std::string& text, const std::string& display_name) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(display_name + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root && !root.IsNull() && !root.IsMap()) {
    throw ConfigError(display_name + ": top level must be a mapping");
  }
  return ConfigView(root, "", display_name);
}

}  // namespace sclink
