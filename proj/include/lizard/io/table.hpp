#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace lizard::io {

/// Empty cells are written as blank CSV fields and JSON nulls.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

inline std::string format_cell(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double d) const { return fmt::format("{:.9g}", d); }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "1" : "0"; }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(V{}, c);
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

/// Column-oriented JSON: {"column": [values...], ...}. Doubles carry the same
/// 9 significant digits as the CSV.
inline nlohmann::ordered_json to_json(const Table& t) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      const Cell& v = row[c];
      if (std::holds_alternative<std::monostate>(v)) arr.push_back(nullptr);
      else if (auto* d = std::get_if<double>(&v)) arr.push_back(std::stod(format_cell(*d)));
      else if (auto* i = std::get_if<std::int64_t>(&v)) arr.push_back(*i);
      else if (auto* b = std::get_if<bool>(&v)) arr.push_back(*b);
      else arr.push_back(std::get<std::string>(v));
    }
    j[t.columns[c]] = std::move(arr);
  }
  return j;
}

}  // namespace lizard::io
