#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pulse {

/// Flat view of a TOML document: nested tables are flattened to dotted keys
/// ("grid.nt", "reaction.params.alpha"). Supports the subset used by medium
/// files: [tables], dotted keys, strings, integers, floats, booleans, comments.
class Config {
public:
  using Value = std::variant<bool, long long, double, std::string>;

  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  long long integer(const std::string& key) const;
  long long integer_or(const std::string& key, long long fallback) const;
  std::string string(const std::string& key) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;

  /// Parses `value` with TOML scalar rules and stores it under `key`,
  /// replacing any previous value.
  void set(const std::string& key, const std::string& value);
  void set_value(const std::string& key, Value v) { values_[key] = std::move(v); }

  /// Keys with the given prefix (including the trailing dot), sorted.
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;
  const std::map<std::string, Value>& values() const { return values_; }
  const std::string& origin() const { return origin_; }

  static std::string render(const Value& v);

private:
  std::map<std::string, Value> values_;
  std::string origin_;
};

}  // namespace pulse
