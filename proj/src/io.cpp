#include "pulse/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "pulse/errors.hpp"

namespace pulse {

const char* const tool_version = "pulsefront 1.0.0";

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvTable::render() const {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      if (const auto* text = std::get_if<std::string>(&row[k])) {
        out += *text;
        continue;
      }
      // Integral values (indices, counts) print without an exponent or fraction.
      const double v = std::get<double>(row[k]);
      if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", v);
        out += buf;
      } else {
        out += format_double(v);
      }
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw NumericalError("cannot open output file " + path);
  f << text;
  if (!f) throw NumericalError("failed writing output file " + path);
}

void write_csv(const std::string& path, const CsvTable& table) { write_text(path, table.render()); }

namespace {

void render(const nlohmann::json& v, int indent, int depth, std::string& out) {
  const std::string pad(std::size_t(indent * (depth + 1)), ' ');
  const std::string close_pad(std::size_t(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += std::string(",") + nl;
        first = false;
        out += pad + nlohmann::json(it.key()).dump() + (indent > 0 ? ": " : ":");
        render(it.value(), indent, depth + 1, out);
      }
      out += nl + close_pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += std::string(",") + nl;
        out += pad;
        render(v[k], indent, depth + 1, out);
      }
      out += nl + close_pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_double(d) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string render_json(const nlohmann::json& value, int indent) {
  std::string out;
  render(value, indent, 0, out);
  out += '\n';
  return out;
}

void write_json(const std::string& path, const nlohmann::json& value) { write_text(path, render_json(value)); }

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["config_path"] = config_path;
  j["command"] = command;
  j["parameters"] = parameters;
  j["seed"] = seed;
  j["tool_version"] = tool_version.empty() ? std::string(pulse::tool_version) : tool_version;
  return j;
}

}  // namespace pulse
