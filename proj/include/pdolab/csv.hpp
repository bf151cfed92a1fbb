#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pdolab {

/// Shortest round-trip decimal representation; identical across runs.
std::string format_number(double value);

/// Splits one CSV line on commas (no quoting support; the formats here never need it).
std::vector<std::string> split_csv_line(std::string_view line);

} // namespace pdolab
