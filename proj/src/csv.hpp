#pragma once

// Minimal reader for the engine's unquoted, comma-separated, '\n'-terminated
// tables. Fields never contain commas or quotes.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "shapebias/error.hpp"

namespace shapebias::csv {

struct Row {
  std::size_t line = 0;  // 1-based, header is line 1
  std::vector<std::string_view> fields;
};

inline std::vector<std::string_view> split(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(text.substr(start));
      return fields;
    }
    fields.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
}

inline double parse_number(std::string_view text, std::size_t line) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorKind::Parse,
                "line " + std::to_string(line) + ": '" + std::string(text) + "' is not a number");
  }
  return value;
}

// Checks the header, then calls fn(Row) for every data row in order.
template <typename Fn>
void for_each_row(std::string_view content, std::string_view header, std::size_t columns,
                  Fn&& fn) {
  std::size_t line = 0;
  std::size_t start = 0;
  bool saw_header = false;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const auto text = content.substr(start, end - start);
    start = end + 1;
    ++line;
    if (!saw_header) {
      if (text != header) {
        throw Error(ErrorKind::Parse, "line 1: expected header '" + std::string(header) + "'");
      }
      saw_header = true;
      continue;
    }
    Row row{line, split(text)};
    if (row.fields.size() != columns) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": expected " +
                                        std::to_string(columns) + " fields, found " +
                                        std::to_string(row.fields.size()));
    }
    fn(row);
  }
  if (!saw_header) throw Error(ErrorKind::Parse, "line 1: missing header");
}

}  // namespace shapebias::csv
