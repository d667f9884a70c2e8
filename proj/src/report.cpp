// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#include "fracap/report.hpp"

#include <cstdio>
#include <set>
#include <sstream>

namespace fracap {

std::string to_json_string(const std::vector<Record>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) arr.push_back(r);
  return arr.dump(2) + "\n";
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_value(const Record& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return csv_escape(v.get<std::string>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  if (v.is_number()) return v.dump();
  if (v.is_array()) {
    // lossy-layout projection of lists: semicolon-joined values
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ';';
      out += csv_value(v[i]);
    }
    return csv_escape(out);
  }
  return csv_escape(v.dump());
}

}  // namespace

std::string to_csv_string(const std::vector<Record>& records) {
  if (records.empty()) return "";
  // stable column set: union of keys in sorted order
  std::set<std::string> columns;
  for (const auto& r : records)
    for (auto it = r.begin(); it != r.end(); ++it) columns.insert(it.key());
  std::ostringstream out;
  bool first = true;
  for (const auto& c : columns) {
    if (!first) out << ',';
    out << csv_escape(c);
    first = false;
  }
  out << '\n';
  for (const auto& r : records) {
    first = true;
    for (const auto& c : columns) {
      if (!first) out << ',';
      first = false;
      if (r.contains(c)) out << csv_value(r.at(c));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace fracap
