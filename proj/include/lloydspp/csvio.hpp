#pragma once

#include <string>
#include <vector>

namespace lloydspp {

/// Shortest text form that round-trips a double exactly.
std::string format_double(double value);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace lloydspp
