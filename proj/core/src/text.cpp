#include "rsf/text.hpp"

#include <charconv>
#include <system_error>

#include "rsf/error.hpp"

namespace rsf {

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

double parse_double(const std::string& text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    // tolerate surrounding spaces, reject anything else unconsumed
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    const char* tail = end;
    while (tail > begin && (tail[-1] == ' ' || tail[-1] == '\t' || tail[-1] == '\r')) --tail;
    const auto result = std::from_chars(begin, tail, value);
    if (result.ec != std::errc{} || result.ptr != tail || begin == tail) {
        throw DataError("not a number: '" + text + "'");
    }
    return value;
}

}  // namespace rsf
