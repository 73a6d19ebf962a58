#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace mexp {

inline constexpr std::string_view kCsvVersionLine = "# moebius-expsum v1";

/// Empty cell (monostate) encodes an absent optional value.
using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

enum class CellKind { boolean, integer, unsigned_integer, real, text };

struct Column {
  std::string name;
  CellKind kind;
};

/// Locale-free shortest round-trip representation ("nan", "inf", "-inf" for non-finite).
std::string format_double(double v);

/// A record set that serializes identically to CSV and JSON.
class Table {
 public:
  explicit Table(std::vector<Column> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  /// Version comment line, header line, one line per row.
  std::string to_csv() const;
  /// Array of row objects keyed by column name.
  nlohmann::json rows_json() const;
  /// {"config": config, "rows": [...]}
  nlohmann::json to_json(const nlohmann::json& config) const;

  /// Reads to_csv() output back; cell types come from `columns`.
  static Table from_csv(std::string_view text, std::vector<Column> columns);

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace mexp
