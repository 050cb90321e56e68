#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace edbound::cli {

// null, number, text, flag
using Cell = std::variant<std::monostate, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Header line plus one line per row. Non-finite numbers print as "inf"/"-inf"/"nan".
void write_csv(std::ostream& out, const Table& table);

/// Array of row objects; non-finite numbers become null.
nlohmann::ordered_json to_json(const Table& table);

nlohmann::ordered_json number_json(double x);

}  // namespace edbound::cli
