#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "clr2d/cli.hpp"

namespace clr2d::cli {

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_quote(const std::string& s) {
  const bool needs = s.find_first_of(",\"\r\n") != std::string::npos || (!s.empty() && (s.front() == ' ' || s.back() == ' '));
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, ExtReal>) {
          return v.is_infinite() ? "inf" : format_double(v.value());
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return csv_quote(v);
        }
      },
      cell);
}

}  // namespace

std::string render_csv(const Report& report) {
  std::string out;
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_quote(report.columns[i]);
  }
  out += '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += csv_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Report& report) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = report.kind;
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : report.metadata) meta[k] = v;
  doc["metadata"] = meta;
  doc["columns"] = report.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < report.columns.size(); ++i) {
      const std::string& col = report.columns[i];
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
              obj[col] = nullptr;
            } else if constexpr (std::is_same_v<T, ExtReal>) {
              obj[col] = v.is_infinite() ? ordered_json(nullptr) : ordered_json(v.value());
              obj[col + "_is_inf"] = v.is_infinite();
            } else {
              obj[col] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

void emit_report(const Report& report, Format format, const std::string& path) {
  const std::string text = format == Format::Json ? render_json(report) : render_csv(report);
  if (path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace clr2d::cli
