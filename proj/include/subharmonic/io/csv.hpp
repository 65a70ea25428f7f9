#pragma once

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "subharmonic/core/dataset.hpp"
#include "subharmonic/error.hpp"

namespace subharmonic::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline std::optional<double> parse_number(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses CSV text with a header row. The response is the column named
/// `response`, or the last column when `response` is empty. Row numbers in
/// errors are 1-based file lines.
inline RawData parse_csv(std::string_view text, const std::string& response = {}) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  while (!lines.empty() && detail::trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::EmptyFile, "no header row");
  if (lines.size() == 1) throw Error(ErrorCode::EmptyFile, "no data rows");

  std::string_view header_line = lines[0];
  if (header_line.starts_with("\xEF\xBB\xBF")) header_line.remove_prefix(3);
  const auto header = detail::split(header_line);
  const std::size_t cols = header.size();
  if (cols < 2) throw Error(ErrorCode::ParseError, "need a response and at least one predictor column");

  std::size_t response_col = cols - 1;
  if (!response.empty()) {
    response_col = cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if (header[c] == response) response_col = c;
    }
    if (response_col == cols) {
      throw Error(ErrorCode::InvalidConfig, "no column named '" + response + "'");
    }
  }

  std::vector<std::vector<double>> rows;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (detail::trim(lines[li]).empty()) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(li + 1) + ": blank line");
    }
    const auto cells = detail::split(lines[li]);
    if (cells.size() != cols) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(li + 1) + ": expected " +
                                             std::to_string(cols) + " cells, found " +
                                             std::to_string(cells.size()));
    }
    std::vector<double> values(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = detail::parse_number(cells[c]);
      if (!v) {
        throw Error(ErrorCode::ParseError, "row " + std::to_string(li + 1) + ", column '" +
                                               std::string(header[c]) + "': not a number: '" +
                                               std::string(cells[c]) + "'");
      }
      values[c] = *v;
    }
    rows.push_back(std::move(values));
  }

  RawData raw;
  const auto n = static_cast<Eigen::Index>(rows.size());
  raw.y.resize(n);
  raw.X.resize(n, static_cast<Eigen::Index>(cols - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index j = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      if (c == response_col) {
        raw.y(i) = rows[static_cast<std::size_t>(i)][c];
      } else {
        raw.X(i, j++) = rows[static_cast<std::size_t>(i)][c];
      }
    }
  }
  for (std::size_t c = 0; c < cols; ++c) {
    if (c != response_col) raw.column_names.emplace_back(header[c]);
  }
  return raw;
}

inline RawData load_csv(const std::string& path, const std::string& response = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.empty()) throw Error(ErrorCode::EmptyFile, "'" + path + "' is empty");
  return parse_csv(text, response);
}

}  // namespace subharmonic::io
