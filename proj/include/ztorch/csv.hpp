#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ztorch::csv {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s);

/// First line of every file the tools write, e.g. "# schema: ztorch.trace/1".
std::string schema_line(std::string_view schema);

}  // namespace ztorch::csv
