#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sartex::text {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Strict parse: the whole field must be a number (surrounding blanks allowed).
/// Throws Error{Format} on failure; `what` names the field in the message.
double parse_double(std::string_view field, std::string_view what);
long long parse_int(std::string_view field, std::string_view what);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

}  // namespace sartex::text
