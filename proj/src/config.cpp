#include "pulse/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pulse/errors.hpp"

namespace pulse {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string normalize_key(const std::string& raw, const std::string& where) {
  std::string out;
  std::stringstream ss(raw);
  std::string part;
  while (std::getline(ss, part, '.')) {
    part = trim(part);
    if (part.size() >= 2 && part.front() == '"' && part.back() == '"') part = part.substr(1, part.size() - 2);
    if (part.empty()) throw ConfigError(where + ": empty key segment in '" + raw + "'");
    out += out.empty() ? part : "." + part;
  }
  if (out.empty()) throw ConfigError(where + ": empty key");
  return out;
}

Config::Value parse_scalar(const std::string& raw, const std::string& where) {
  std::string s = trim(raw);
  if (s.empty()) throw ConfigError(where + ": missing value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') throw ConfigError(where + ": unterminated string " + s);
    return s.substr(1, s.size() - 2);
  }
  if (s == "true") return true;
  if (s == "false") return false;
  std::string digits;
  for (char ch : s)
    if (ch != '_') digits.push_back(ch);
  bool looks_float = digits.find_first_of(".eE") != std::string::npos || digits == "inf" ||
                     digits == "+inf" || digits == "-inf" || digits == "nan";
  if (!looks_float) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) return v;
  }
  // strtod accepts inf/nan and exponent forms, which from_chars for double lacks on older libstdc++.
  char* end = nullptr;
  double d = std::strtod(digits.c_str(), &end);
  if (end != digits.c_str() + digits.size() || digits.empty())
    throw ConfigError(where + ": cannot parse value '" + s + "'");
  return d;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string table;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.rfind("[[", 0) == 0) throw ConfigError(where + ": unsupported table header " + s);
      table = normalize_key(s.substr(1, s.size() - 2), where);
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    std::string key = normalize_key(s.substr(0, eq), where);
    if (!table.empty()) key = table + "." + key;
    if (cfg.values_.count(key)) throw ConfigError(where + ": duplicate key " + key);
    cfg.values_[key] = parse_scalar(s.substr(eq + 1), where);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

double Config::number(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key " + key);
  if (auto* d = std::get_if<double>(&it->second)) return *d;
  if (auto* i = std::get_if<long long>(&it->second)) return static_cast<double>(*i);
  throw ConfigError("config key " + key + " is not a number");
}

double Config::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long long Config::integer(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key " + key);
  if (auto* i = std::get_if<long long>(&it->second)) return *i;
  throw ConfigError("config key " + key + " is not an integer");
}

long long Config::integer_or(const std::string& key, long long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string Config::string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key " + key);
  if (auto* s = std::get_if<std::string>(&it->second)) return *s;
  throw ConfigError("config key " + key + " is not a string");
}

std::string Config::string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

void Config::set(const std::string& key, const std::string& value) {
  values_[normalize_key(key, "override")] = parse_scalar(value, "override " + key);
}

std::vector<std::string> Config::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (auto it = values_.lower_bound(prefix); it != values_.end() && it->first.rfind(prefix, 0) == 0; ++it)
    out.push_back(it->first);
  return out;
}

std::string Config::render(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.17g", x);
          return buf;
        } else {
          return "\"" + x + "\"";
        }
      },
      v);
}

}  // namespace pulse
