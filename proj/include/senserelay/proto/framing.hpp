#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "senserelay/proto/message.hpp"

namespace senserelay::proto {

// Frame layout: 4-byte big-endian body length N, then N bytes of UTF-8 JSON
// with a top-level "type" field. N is capped at 64 KiB so a peer cannot make
// us buffer unbounded input.
inline constexpr std::size_t kMaxFrameBody = 65536;

// Throws OversizeMessage if the body exceeds the cap, MalformedPayload if the
// message violates its own invariants.
std::vector<std::uint8_t> encode_message(const Message& msg);

struct Decoded {
    Message message;
    std::size_t consumed; // exactly 4 + N bytes
};

// Throws TruncatedFrame when fewer bytes are present than the prefix
// promises, OversizeMessage when N exceeds the cap, MalformedPayload on bad
// JSON / unknown type / invariant violations.
Decoded decode_message(std::span<const std::uint8_t> bytes);

// Incremental frame assembly for stream transports. feed() whatever arrives;
// next() yields complete messages in order and returns nullopt while a frame
// is still partial. Malformed or oversize frames throw; the stream is then
// unusable (framing is lost).
class FrameBuffer {
public:
    void feed(std::span<const std::uint8_t> bytes);
    std::optional<Message> next();

    std::size_t buffered() const { return buf_.size(); }

private:
    std::vector<std::uint8_t> buf_;
};

} // namespace senserelay::proto
