#pragma once

// Serialization shared by every subcommand: CSV with a header row and JSON,
// both writing floating-point values with 17 significant digits.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace sspec::cli {

using Json = nlohmann::ordered_json;

/// %.17g; non-finite values become "nan", "inf" or "-inf".
std::string format_number(double v);

/// Compact JSON with floats as %.17g and non-finite floats as null.
std::string write_json(const Json& doc);

using Cell = std::variant<std::string, double, std::int64_t, std::uint64_t>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

/// Comma-separated, LF line endings, fields quoted only when they contain a
/// comma, quote or newline.
std::string write_csv(const Table& table);

}  // namespace sspec::cli
