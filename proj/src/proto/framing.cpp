#include "senserelay/proto/framing.hpp"

#include "senserelay/errors.hpp"

namespace senserelay::proto {

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes) {
    return (static_cast<std::uint32_t>(bytes[0]) << 24) |
           (static_cast<std::uint32_t>(bytes[1]) << 16) |
           (static_cast<std::uint32_t>(bytes[2]) << 8) | static_cast<std::uint32_t>(bytes[3]);
}

} // namespace

std::vector<std::uint8_t> encode_message(const Message& msg) {
    validate(msg);
    const std::string body = to_json(msg).dump();
    if (body.size() > kMaxFrameBody) {
        throw OversizeMessage("encoded body is " + std::to_string(body.size()) +
                              " bytes, cap is " + std::to_string(kMaxFrameBody));
    }
    std::vector<std::uint8_t> frame;
    frame.reserve(4 + body.size());
    const auto n = static_cast<std::uint32_t>(body.size());
    frame.push_back(static_cast<std::uint8_t>(n >> 24));
    frame.push_back(static_cast<std::uint8_t>(n >> 16));
    frame.push_back(static_cast<std::uint8_t>(n >> 8));
    frame.push_back(static_cast<std::uint8_t>(n));
    frame.insert(frame.end(), body.begin(), body.end());
    return frame;
}

Decoded decode_message(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4) {
        throw TruncatedFrame("frame shorter than the 4-byte length prefix");
    }
    const std::uint32_t n = read_be32(bytes);
    if (n > kMaxFrameBody) {
        throw OversizeMessage("frame declares " + std::to_string(n) + " bytes, cap is " +
                              std::to_string(kMaxFrameBody));
    }
    if (bytes.size() < 4 + static_cast<std::size_t>(n)) {
        throw TruncatedFrame("frame declares " + std::to_string(n) + " bytes, only " +
                             std::to_string(bytes.size() - 4) + " present");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes.begin() + 4, bytes.begin() + 4 + n);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedPayload(std::string("invalid JSON body: ") + e.what());
    }
    return Decoded{message_from_json(j), 4 + static_cast<std::size_t>(n)};
}

void FrameBuffer::feed(std::span<const std::uint8_t> bytes) {
    buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

std::optional<Message> FrameBuffer::next() {
    if (buf_.size() < 4) return std::nullopt;
    const std::uint32_t n = read_be32(buf_);
    if (n > kMaxFrameBody) {
        throw OversizeMessage("frame declares " + std::to_string(n) + " bytes, cap is " +
                              std::to_string(kMaxFrameBody));
    }
    if (buf_.size() < 4 + static_cast<std::size_t>(n)) return std::nullopt;
    Decoded d = decode_message(buf_);
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(d.consumed));
    return std::move(d.message);
}

} // namespace senserelay::proto
