#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace senserelay {

// Shortest round-trip decimal form (std::to_chars), identical on every
// platform. Used for all CSV output.
std::string format_double(double v);

std::vector<std::string> split(std::string_view s, char sep);

// "host:port" -> pair; strips brackets around IPv6 hosts. Throws
// InvalidParams on a missing/empty port.
std::pair<std::string, std::uint16_t> split_host_port(const std::string& address);

// Strict numeric parsers; throw InvalidParams naming `what` on garbage.
double parse_double(std::string_view text, std::string_view what);
std::uint64_t parse_u64(std::string_view text, std::string_view what);

} // namespace senserelay
