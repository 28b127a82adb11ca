#pragma once

// Minimal helpers for the small, unquoted CSV formats the library reads.

#include <istream>
#include <string>
#include <vector>

#include "unseen/error.hpp"

namespace unseen::detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

/// RFC 4180 field splitting for lines that may carry quoted fields.
inline std::vector<std::string> split_quoted_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) {
    throw InvalidArgument("unterminated quoted field");
  }
  fields.push_back(field);
  return fields;
}

inline std::string quote_field(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// Reads the next line, dropping a trailing CR. Returns false at EOF.
inline bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) {
    return false;
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  return true;
}

inline void expect_header(std::istream& in, const std::string& expected) {
  std::string line;
  if (!next_line(in, line)) {
    throw InvalidArgument("empty file: expected header '" + expected + "'");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  if (line != expected) {
    throw InvalidArgument("bad header '" + line + "', expected '" + expected + "'");
  }
}

}  // namespace unseen::detail
