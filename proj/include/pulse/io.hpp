#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace pulse {

/// Doubles as text with 17 significant digits.
std::string format_double(double v);

/// A CSV table held in memory so it can be compared and written verbatim.
struct CsvTable {
  using Cell = std::variant<double, std::string>;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  std::string render() const;
};

void write_text(const std::string& path, const std::string& text);
void write_csv(const std::string& path, const CsvTable& table);

/// JSON text with every floating-point number printed with 17 significant digits.
std::string render_json(const nlohmann::json& value, int indent = 2);
void write_json(const std::string& path, const nlohmann::json& value);

/// Emitted under "manifest" in every JSON summary.
struct RunManifest {
  std::string config_path;
  std::string command;
  std::map<std::string, std::string> parameters;  // resolved config keys and flags
  std::uint64_t seed = 0;
  std::string tool_version;

  nlohmann::json to_json() const;
};

extern const char* const tool_version;

}  // namespace pulse
