#include "triphase/table.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "triphase/errors.hpp"

namespace triphase {

void Table::add(std::vector<double> row) {
  if (row.size() != header.size()) throw ConfigError("Table::add: row width differs from header");
  rows.push_back(std::move(row));
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Table::to_csv() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << csv_escape(header[k]);
  os << "\r\n";
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << format_double(r[k]);
    os << "\r\n";
  }
  return os.str();
}

}  // namespace triphase
