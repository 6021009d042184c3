#pragma once

#include <string>

namespace rsf {

// Shortest decimal form that parses back to the same double; used everywhere
// a number is written to disk so outputs are byte-stable.
std::string format_double(double value);

// Strict full-string parse; throws DataError otherwise.
double parse_double(const std::string& text);

}  // namespace rsf
