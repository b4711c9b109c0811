#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace typekg {

// Shortest decimal that round-trips the exact double; keeps emitted CSV
// parseable back to identical bits and reprints byte-identical.
std::string format_double(double v);

double parse_double(std::string_view s);

std::vector<std::string> split_csv_line(const std::string& line);

// Quotes a CSV field only when it needs it.
std::string csv_escape(const std::string& field);

}  // namespace typekg
