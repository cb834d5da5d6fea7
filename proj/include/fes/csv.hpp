#pragma once

#include <string>
#include <vector>

namespace fes {

// Plot-facing CSV output. Numbers go through csv_num (10 significant digits);
// anything else is written verbatim, so callers format non-numeric cells.
std::string csv_num(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

} // namespace fes
