#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levyq {

/// 10 significant digits, '.' decimal separator, independent of locale.
std::string format_number(double value);

/// Header row then one line per row, comma separated.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace levyq
