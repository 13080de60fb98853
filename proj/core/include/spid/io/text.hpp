// Copyright 2026 The spid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPID_IO_TEXT_HPP_
#define SPID_IO_TEXT_HPP_

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spid/errors.hpp"

namespace spid::io {

// Shortest decimal form that round-trips a double exactly.
inline std::string format_full(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

// Fixed 6 significant digits, for deterministic metric summaries.
inline std::string format_sig6(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

inline double parse_double(const std::string& token) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') {
    throw IoError("not a number: '" + token + "'");
  }
  return v;
}

inline std::vector<std::string> split_whitespace(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

// Splits on commas and trims surrounding blanks, for delimited headers/rows.
inline std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&]() {
    const std::size_t begin = current.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
      tokens.emplace_back();
    } else {
      const std::size_t end = current.find_last_not_of(" \t\r");
      tokens.push_back(current.substr(begin, end - begin + 1));
    }
    current.clear();
  };
  for (char c : line) {
    if (c == ',') {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  return tokens;
}

// Files whose basename starts with this prefix hold ground truth that
// identification and evaluation must never see.
inline constexpr const char* kHiddenPrefix = "hidden_";

inline bool is_hidden_path(const std::string& path) {
  const std::string name = std::filesystem::path(path).filename().string();
  return name.rfind(kHiddenPrefix, 0) == 0;
}

inline void refuse_hidden(const std::string& path) {
  if (is_hidden_path(path)) {
    throw HiddenParamsError("refusing to read hidden ground truth: " + path);
  }
}

inline std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

inline std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  return in;
}

// Flat key-value configuration: one `key value...` per line, '#' starts a
// comment, blank lines ignored. Values keep their raw token form so callers
// choose the type.
struct Config {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }

  std::string get_string(const std::string& key,
                         const std::string& fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }

  std::string require_string(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing config key: " + key);
    return it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    return parse_double(first_token(key, it->second));
  }

  double require_double(const std::string& key) const {
    return parse_double(first_token(key, require_string(key)));
  }

  int get_int(const std::string& key, int fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    return parse_int(key, first_token(key, it->second));
  }

  int require_int(const std::string& key) const {
    return parse_int(key, first_token(key, require_string(key)));
  }

  void set(const std::string& key, const std::string& value) {
    values[key] = value;
  }

 private:
  static std::string first_token(const std::string& key,
                                 const std::string& raw) {
    const auto tokens = split_whitespace(raw);
    if (tokens.empty()) throw ConfigError("empty value for config key: " + key);
    return tokens.front();
  }

  static int parse_int(const std::string& key, const std::string& token) {
    char* end = nullptr;
    const long v = std::strtol(token.c_str(), &end, 10);
    if (end == token.c_str() || *end != '\0') {
      throw ConfigError("config key " + key + " is not an integer: '" + token +
                        "'");
    }
    return static_cast<int>(v);
  }
};

inline Config parse_config(std::istream& in) {
  Config config;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    auto tokens = split_whitespace(line);
    if (tokens.empty()) continue;
    std::string value;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      if (i > 1) value += ' ';
      value += tokens[i];
    }
    config.values[tokens.front()] = value;
  }
  return config;
}

inline Config read_config(const std::string& path) {
  auto in = open_for_read(path);
  return parse_config(in);
}

// Ordered key=value metric summary. Keys appear exactly in insertion order,
// numbers in fixed 6-significant-digit form, so a fixed seed yields a
// byte-identical file.
struct Summary {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(const std::string& key, const std::string& value) {
    entries.emplace_back(key, value);
  }
  void add(const std::string& key, double value) {
    entries.emplace_back(key, format_sig6(value));
  }
  void add(const std::string& key, int value) {
    entries.emplace_back(key, std::to_string(value));
  }

  std::string to_string() const {
    std::string out;
    for (const auto& [key, value] : entries) {
      out += key;
      out += '=';
      out += value;
      out += '\n';
    }
    return out;
  }
};

inline void write_summary(const std::string& path, const Summary& summary) {
  auto out = open_for_write(path);
  out << summary.to_string();
}

inline std::map<std::string, std::string> read_summary(
    const std::string& path) {
  auto in = open_for_read(path);
  std::map<std::string, std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw IoError("summary line without '=': " + line);
    }
    entries[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return entries;
}

// Delimited numeric table with a comma-separated header, full precision.
inline void write_table(const std::string& path,
                        const std::vector<std::string>& columns,
                        const std::vector<std::vector<double>>& rows) {
  auto out = open_for_write(path);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c > 0) out << ", ";
    out << columns[c];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) {
      throw DimensionMismatchError("table row width does not match header");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ", ";
      out << format_full(row[c]);
    }
    out << '\n';
  }
}

}  // namespace spid::io

#endif  // SPID_IO_TEXT_HPP_
