#include "mexp/records.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mexp/errors.hpp"

namespace mexp {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::string csv_field(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, std::string>) {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
          return q + '"';
        } else return std::to_string(v);
      },
      c);
}

nlohmann::json json_value(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_double(v);
          return v;
        } else return v;
      },
      c);
}

template <class T>
T parse_number(std::string_view s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("bad CSV number '" + std::string(s) + "'");
  return v;
}

Cell parse_cell(std::string_view s, CellKind kind) {
  if (s.empty()) return std::monostate{};
  switch (kind) {
    case CellKind::boolean:
      if (s == "true") return true;
      if (s == "false") return false;
      throw ConfigError("bad CSV boolean '" + std::string(s) + "'");
    case CellKind::integer: return parse_number<std::int64_t>(s);
    case CellKind::unsigned_integer: return parse_number<std::uint64_t>(s);
    case CellKind::real:
      if (s == "nan") return std::nan("");
      if (s == "inf") return HUGE_VAL;
      if (s == "-inf") return -HUGE_VAL;
      return parse_number<double>(s);
    default: return std::string(s);
  }
}

// Splits one CSV line, undoing the quoting of csv_field.
std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch != '"') fields.back() += ch;
      else if (i + 1 < line.size() && line[i + 1] == '"') fields.back() += '"', ++i;
      else quoted = false;
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  if (quoted) throw ConfigError("CSV line has an unterminated quote");
  return fields;
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw InvariantError("row width does not match columns");
  rows_.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::string out(kCsvVersionLine);
  out += '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i].name;
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
    out += '\n';
  }
  return out;
}

nlohmann::json Table::rows_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[columns_[i].name] = json_value(row[i]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

nlohmann::json Table::to_json(const nlohmann::json& config) const {
  nlohmann::json j = nlohmann::json::object();
  j["config"] = config;
  j["rows"] = rows_json();
  return j;
}

Table Table::from_csv(std::string_view text, std::vector<Column> columns) {
  Table t(std::move(columns));
  std::istringstream in{std::string(text)};
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != t.columns_.size()) throw ConfigError("CSV line has wrong field count");
    if (!header_seen) {
      for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i] != t.columns_[i].name) throw ConfigError("CSV header mismatch at '" + fields[i] + "'");
      header_seen = true;
      continue;
    }
    std::vector<Cell> row;
    for (std::size_t i = 0; i < fields.size(); ++i) row.push_back(parse_cell(fields[i], t.columns_[i].kind));
    t.rows_.push_back(std::move(row));
  }
  return t;
}

}  // namespace mexp
