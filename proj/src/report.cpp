#include "nbx/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <vector>

namespace nbx {

namespace {

using json = nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void escape_into(const std::string& s, std::string& out) {
  out.push_back('"');
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back('"');
}

void dump_canonical(const json& v, std::string& out, bool pretty, int depth) {
  const std::string pad = pretty ? std::string(2 * (depth + 1), ' ') : "";
  const std::string close_pad = pretty ? std::string(2 * depth, ' ') : "";
  const char* nl = pretty ? "\n" : "";
  switch (v.type()) {
    case json::value_t::null: out += "null"; break;
    case json::value_t::boolean: out += v.get<bool>() ? "true" : "false"; break;
    case json::value_t::number_integer:
      out += std::to_string(v.get<std::int64_t>());
      break;
    case json::value_t::number_unsigned:
      out += std::to_string(v.get<std::uint64_t>());
      break;
    case json::value_t::number_float: out += format_double(v.get<double>()); break;
    case json::value_t::string: escape_into(v.get<std::string>(), out); break;
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        break;
      }
      out += "[";
      out += nl;
      for (std::size_t i = 0; i < v.size(); ++i) {
        out += pad;
        dump_canonical(v[i], out, pretty, depth + 1);
        if (i + 1 < v.size()) out += ",";
        out += nl;
      }
      out += close_pad;
      out += "]";
      break;
    }
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        break;
      }
      out += "{";
      out += nl;
      std::size_t i = 0;
      for (auto it = v.begin(); it != v.end(); ++it, ++i) {
        out += pad;
        escape_into(it.key(), out);
        out += pretty ? ": " : ":";
        dump_canonical(it.value(), out, pretty, depth + 1);
        if (i + 1 < v.size()) out += ",";
        out += nl;
      }
      out += close_pad;
      out += "}";
      break;
    }
    default: out += "null"; break;
  }
}

/// JSON has no NaN/Inf; replace them with null and record where.
void sanitize(json& v, const std::string& path, std::vector<std::string>& warnings) {
  if (v.is_number_float()) {
    if (!std::isfinite(v.get<double>())) {
      warnings.push_back("non-finite value at " + path + " rendered as null");
      v = nullptr;
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i)
      sanitize(v[i], path + "[" + std::to_string(i) + "]", warnings);
  } else if (v.is_object()) {
    for (auto& [key, value] : v.items()) sanitize(value, path + "." + key, warnings);
  }
}

}  // namespace

std::string emit_report(nlohmann::json report, bool pretty) {
  std::vector<std::string> warnings;
  sanitize(report, "$", warnings);
  if (!warnings.empty()) report["warnings"] = warnings;
  std::string text;
  dump_canonical(report, text, pretty, 0);
  text += "\n";
  return text;
}

}  // namespace nbx
