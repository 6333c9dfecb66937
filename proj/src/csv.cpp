#include "medpower/csv.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace medpower {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

template <typename T>
T parse_number(std::string_view s, const char* what) {
    T value{};
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end || s.empty()) {
        throw std::invalid_argument(std::string(what) + ": bad number '" + std::string(s) + "'");
    }
    return value;
}

}  // namespace

double parse_double(std::string_view s) { return parse_number<double>(s, "parse_double"); }
long parse_long(std::string_view s) { return parse_number<long>(s, "parse_long"); }
int parse_int(std::string_view s) { return parse_number<int>(s, "parse_int"); }
std::uint64_t parse_u64(std::string_view s) { return parse_number<std::uint64_t>(s, "parse_u64"); }

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            out.emplace_back(line.substr(pos));
            return out;
        }
        out.emplace_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
}

}  // namespace medpower
