#include "table.hpp"

#include <cmath>

#include "cli.hpp"

namespace edbound::cli {

namespace {

std::string csv_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double x) const { return format_number(x); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string quoted = "\"";
      for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      return quoted + "\"";
    }
    std::string operator()(bool b) const { return b ? "1" : "0"; }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

nlohmann::ordered_json number_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

nlohmann::ordered_json to_json(const Table& table) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& cell = row[i];
      auto& slot = obj[table.columns[i]];
      if (std::holds_alternative<double>(cell)) {
        slot = number_json(std::get<double>(cell));
      } else if (std::holds_alternative<std::string>(cell)) {
        slot = std::get<std::string>(cell);
      } else if (std::holds_alternative<bool>(cell)) {
        slot = std::get<bool>(cell);
      } else {
        slot = nullptr;
      }
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

}  // namespace edbound::cli
