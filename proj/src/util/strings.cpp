#include "senserelay/util/strings.hpp"

#include <charconv>
#include <system_error>

#include "senserelay/errors.hpp"

namespace senserelay {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::pair<std::string, std::uint16_t> split_host_port(const std::string& address) {
    std::size_t colon = address.rfind(':');
    if (colon == std::string::npos || colon + 1 == address.size()) {
        throw InvalidParams("address '" + address + "' is not host:port");
    }
    std::string host = address.substr(0, colon);
    if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
        host = host.substr(1, host.size() - 2);
    }
    if (host.empty()) throw InvalidParams("address '" + address + "' has an empty host");
    auto port = parse_u64(address.substr(colon + 1), "port");
    if (port > 65535) throw InvalidParams("port out of range in '" + address + "'");
    return {host, static_cast<std::uint16_t>(port)};
}

double parse_double(std::string_view text, std::string_view what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidParams(std::string(what) + ": '" + std::string(text) + "' is not a number");
    }
    return v;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidParams(std::string(what) + ": '" + std::string(text) +
                            "' is not an unsigned integer");
    }
    return v;
}

} // namespace senserelay
