#include "senserelay/proto/node_id.hpp"

#include <array>
#include <cctype>

#include <openssl/evp.h>

#include "senserelay/errors.hpp"

namespace senserelay::proto {

namespace {

bool is_lower_hex(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
}

} // namespace

bool NodeId::is_valid(const std::string& s) {
    if (s.size() != kLength) return false;
    for (char c : s) {
        if (!is_lower_hex(c)) return false;
    }
    return true;
}

NodeId NodeId::parse(const std::string& s) {
    if (!is_valid(s)) {
        throw MalformedPayload("node id '" + s + "' is not 16 lowercase hex characters");
    }
    return NodeId(s);
}

std::optional<NodeId> NodeId::try_parse(const std::string& s) {
    if (!is_valid(s)) return std::nullopt;
    return NodeId(s);
}

std::string normalize_phone(const std::string& phone) {
    std::string out;
    out.reserve(phone.size());
    for (char c : phone) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            out.push_back(c);
        } else if (c == '+' && out.empty()) {
            out.push_back(c);
        }
    }
    return out;
}

NodeId derive_node_id(const std::string& phone) {
    const std::string normalized = normalize_phone(phone);
    if (normalized.empty()) {
        throw EmptyIdentifier("phone identifier is empty after normalization");
    }

    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int digest_len = 0;
    if (EVP_Digest(normalized.data(), normalized.size(), digest.data(), &digest_len,
                   EVP_sha256(), nullptr) != 1 ||
        digest_len < NodeId::kLength / 2) {
        throw Error("SHA-256 digest failed");
    }

    static constexpr char hex[] = "0123456789abcdef";
    std::string id;
    id.reserve(NodeId::kLength);
    for (std::size_t i = 0; i < NodeId::kLength / 2; ++i) {
        id.push_back(hex[digest[i] >> 4]);
        id.push_back(hex[digest[i] & 0x0f]);
    }
    return NodeId::parse(id);
}

} // namespace senserelay::proto
