#pragma once

#include <string>
#include <vector>

namespace triphase {

// Numeric table with a mandatory header row. CSV output is RFC 4180 style
// (CRLF line ends, quoted header cells when needed) with %.17g values.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
  std::string to_csv() const;
};

std::string csv_escape(const std::string& cell);
std::string format_double(double v);

}  // namespace triphase
