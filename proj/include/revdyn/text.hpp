#pragma once

// Small helpers shared by the line-oriented document readers and the report
// writers.

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace revdyn::text {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// A logical line: its 1-based number and content with comments dropped.
struct Line {
  std::size_t number;
  std::string_view content;
};

/// Splits a document into trimmed non-empty lines, skipping '#' comments.
inline std::vector<Line> logical_lines(std::string_view doc) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= doc.size()) {
    auto end = doc.find('\n', start);
    if (end == std::string_view::npos) end = doc.size();
    ++number;
    const auto line = trim(doc.substr(start, end - start));
    if (!line.empty() && line.front() != '#') out.push_back({number, line});
    start = end + 1;
  }
  return out;
}

/// If `line` starts with `key` followed by ':', returns the remainder.
inline bool strip_key(std::string_view line, std::string_view key,
                      std::string_view& rest) {
  if (line.size() <= key.size() || line.substr(0, key.size()) != key ||
      line[key.size()] != ':')
    return false;
  rest = trim(line.substr(key.size() + 1));
  return true;
}

/// printf-style "%.<digits>g" formatting.
inline std::string sig(double value, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

}  // namespace revdyn::text
