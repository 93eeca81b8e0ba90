#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "qchaos/error.hpp"

namespace qchaos::runner {

/// Shortest round-trip-safe rendering with 17 significant digits.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw Error(ErrorKind::Io, "cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

/// Writes `contents` to a sibling temp file, then renames it over `path`.
inline void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot rename onto " + path.string());
  }
}

inline std::string render_csv(std::string_view x_name, std::string_view y_name,
                              std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorKind::Shape, "csv columns differ in length");
  if (xs.empty()) throw Error(ErrorKind::InsufficientData, "refusing to write an empty table");
  std::string out;
  out.reserve(40 * (xs.size() + 1));
  out += "# ";
  out += x_name;
  out += ',';
  out += y_name;
  out += '\n';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out += format_double(xs[i]);
    out += ',';
    out += format_double(ys[i]);
    out += '\n';
  }
  return out;
}

/// Two-column table: `# x,y` header then one `x,y` row per point.
inline void emit_csv(const std::filesystem::path& path, std::string_view x_name, std::string_view y_name,
                     std::span<const double> xs, std::span<const double> ys) {
  write_atomically(path, render_csv(x_name, y_name, xs, ys));
}

struct CsvTable {
  std::string x_name;
  std::string y_name;
  std::vector<double> xs;
  std::vector<double> ys;
};

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw Error(ErrorKind::Io, path.string() + ": missing '# x,y' header");
  }
  const auto header = line.substr(2);
  const auto comma = header.find(',');
  if (comma == std::string::npos) throw Error(ErrorKind::Io, path.string() + ": malformed header");
  table.x_name = header.substr(0, comma);
  table.y_name = header.substr(comma + 1);
  while (std::getline(in, line)) {
    const auto c = line.find(',');
    if (c == std::string::npos) throw Error(ErrorKind::Io, path.string() + ": malformed row '" + line + "'");
    table.xs.push_back(parse_double(std::string_view(line).substr(0, c)));
    table.ys.push_back(parse_double(std::string_view(line).substr(c + 1)));
  }
  return table;
}

}  // namespace qchaos::runner
