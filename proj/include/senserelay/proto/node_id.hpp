#pragma once

#include <compare>
#include <optional>
#include <string>

namespace senserelay::proto {

// Node identity on the wire: exactly 16 lowercase hex characters, derived
// from the node's phone number. Never reversible to the phone.
class NodeId {
public:
    static constexpr std::size_t kLength = 16;

    // All-zero id; used as a placeholder before an identity is assigned.
    NodeId() : value_(kLength, '0') {}

    // Throws MalformedPayload unless `s` is 16 chars of [0-9a-f].
    static NodeId parse(const std::string& s);
    static std::optional<NodeId> try_parse(const std::string& s);
    static bool is_valid(const std::string& s);

    const std::string& value() const { return value_; }

    auto operator<=>(const NodeId&) const = default;

private:
    explicit NodeId(std::string v) : value_(std::move(v)) {}
    std::string value_;
};

// Drops phone formatting: keeps digits plus a leading '+', discards
// everything else. "+1 (949) 555-0100" -> "+19495550100".
std::string normalize_phone(const std::string& phone);

// First 16 hex characters of SHA-256 over the normalized phone string.
// Pure function; throws EmptyIdentifier when nothing survives normalization.
NodeId derive_node_id(const std::string& phone);

} // namespace senserelay::proto
