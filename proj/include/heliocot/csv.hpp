#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace heliocot::csv {

// Shortest decimal form that parses back to the same double ("12", "0.25").
std::string format_number(double value);

// Strict double parse of a whole field. Throws ParseError.
double parse_number(std::string_view field, long line = 0);

// Strict non-negative integer parse. Throws ParseError.
long parse_integer(std::string_view field, long line = 0);

// Splits one line on commas; no quoting (the formats here never need it).
std::vector<std::string_view> split_fields(std::string_view line);

// Reads lines off a text blob, accepting LF endings only. A trailing
// newline is expected on every line including the last.
std::vector<std::string_view> split_lines(std::string_view text);

// Verifies the header line matches exactly. Throws ParseError.
void expect_header(std::string_view got, std::string_view want);

} // namespace heliocot::csv
