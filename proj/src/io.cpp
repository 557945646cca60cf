#include "levyq/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "levyq/errors.hpp"

namespace levyq {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  std::string s(buf);
  // snprintf honours LC_NUMERIC; force the '.' separator.
  for (char& c : s) {
    if (c == ',') c = '.';
  }
  return s;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw ValidationError("write_csv: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

}  // namespace levyq
