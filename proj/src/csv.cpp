#include "heliocot/csv.hpp"

#include <charconv>
#include <system_error>

#include "heliocot/errors.hpp"

namespace heliocot::csv {

std::string format_number(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view field, long line) {
    double value = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw ParseError("bad number '" + std::string(field) + "'", line);
    return value;
}

long parse_integer(std::string_view field, long line) {
    long value = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw ParseError("bad integer '" + std::string(field) + "'", line);
    return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto pos = text.find('\n', start);
        if (pos == std::string_view::npos) {
            // tolerate a missing final newline
            out.push_back(text.substr(start));
            break;
        }
        std::string_view line = text.substr(start, pos - start);
        if (!line.empty() && line.back() == '\r')
            throw ParseError("CRLF line ending (LF required)", static_cast<long>(out.size() + 1));
        out.push_back(line);
        start = pos + 1;
    }
    return out;
}

void expect_header(std::string_view got, std::string_view want) {
    if (got != want)
        throw ParseError("bad header '" + std::string(got) + "' (expected '" + std::string(want) + "')", 1);
}

} // namespace heliocot::csv
