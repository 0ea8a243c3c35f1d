// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#include "output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace carnot::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format_cell(const Cell& c) {
  struct {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(std::uint64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  } visitor;
  return std::visit(visitor, c);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

nlohmann::ordered_json to_json_value(const Cell& c) {
  struct {
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(double d) const {
      if (!std::isfinite(d)) return format_double(d);
      return d;
    }
    nlohmann::ordered_json operator()(std::int64_t i) const { return i; }
    nlohmann::ordered_json operator()(std::uint64_t i) const { return i; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
  } visitor;
  return std::visit(visitor, c);
}

}  // namespace

std::string to_csv(const Table& t) {
  std::ostringstream os;
  os << "# command: " << t.command << '\n';
  for (const auto& [k, v] : t.config) os << "# " << k << ": " << v << '\n';
  for (const auto& [k, v] : t.summary) os << "# " << k << ": " << format_cell(v) << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(format_cell(row[i]));
    os << '\n';
  }
  return os.str();
}

std::string to_json(const Table& t) {
  nlohmann::ordered_json j;
  j["command"] = t.command;
  auto& config = j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.config) config[k] = v;
  auto& summary = j["summary"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.summary) summary[k] = to_json_value(v);
  j["columns"] = t.columns;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    auto& r = rows.emplace_back(nlohmann::ordered_json::array());
    for (const Cell& c : row) r.push_back(to_json_value(c));
  }
  return j.dump(2) + "\n";
}

std::string to_text(const Table& t) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back(t.columns);
  for (const auto& row : t.rows) {
    std::vector<std::string> r;
    for (const Cell& c : row) r.push_back(format_cell(c));
    cells.push_back(std::move(r));
  }
  std::vector<std::size_t> width(t.columns.size(), 0);
  for (const auto& r : cells)
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
  std::ostringstream os;
  for (const auto& r : cells) {
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) {
      os << r[i];
      if (i + 1 < r.size()) os << std::string(width[i] - r[i].size() + 2, ' ');
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace carnot::cli
