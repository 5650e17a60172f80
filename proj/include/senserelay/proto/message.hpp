#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "senserelay/clock.hpp"
#include "senserelay/proto/node_id.hpp"

namespace senserelay::proto {

// Closed sensor taxonomy. Unknown kinds are a decode error; extending the
// set is a protocol version bump.
enum class SensorKind {
    temperature,
    location,
    accelerometer,
    light,
    proximity,
    microphone_level,
};

inline constexpr std::array<SensorKind, 6> kAllSensorKinds = {
    SensorKind::temperature, SensorKind::location,  SensorKind::accelerometer,
    SensorKind::light,       SensorKind::proximity, SensorKind::microphone_level,
};

std::string_view to_string(SensorKind kind);
std::optional<SensorKind> sensor_kind_from_string(std::string_view name);

// Scalar sample, or a lat/lon pair for location.
using SensorValue = std::variant<double, std::array<double, 2>>;

struct SensorReading {
    SensorKind kind = SensorKind::temperature;
    SensorValue value = 0.0;
    std::string unit;
    EpochMs timestamp_ms = 0;
    NodeId origin;

    bool operator==(const SensorReading&) const = default;
};

// --- wire messages (discriminated by the "type" field) ---

struct Register {
    NodeId node;
    std::string phone;
    bool operator==(const Register&) const = default;
};

struct RegisterAck {
    NodeId node;
    bool operator==(const RegisterAck&) const = default;
};

struct Heartbeat {
    NodeId node;
    bool operator==(const Heartbeat&) const = default;
};

struct Query {
    std::uint64_t request_id = 0;
    NodeId requester;
    NodeId target;
    SensorKind kind = SensorKind::temperature;
    bool operator==(const Query&) const = default;
};

struct QueryForward {
    std::uint64_t request_id = 0;
    NodeId requester;
    NodeId target;
    SensorKind kind = SensorKind::temperature;
    bool operator==(const QueryForward&) const = default;
};

struct Response {
    std::uint64_t request_id = 0;
    NodeId requester;
    NodeId target;
    SensorReading reading;
    bool operator==(const Response&) const = default;
};

struct Unavailable {
    std::uint64_t request_id = 0;
    NodeId target;
    std::string reason;
    bool operator==(const Unavailable&) const = default;
};

// Named ErrorMsg so it does not shadow the exception hierarchy. Correlatable
// errors carry a JSON object in `detail` with a "request_id" member.
struct ErrorMsg {
    std::string code;
    std::string detail;
    bool operator==(const ErrorMsg&) const = default;
};

using Message = std::variant<Register, RegisterAck, Heartbeat, Query, QueryForward, Response,
                             Unavailable, ErrorMsg>;

// Wire discriminant ("register", "query-forward", ...).
std::string_view type_name(const Message& msg);

// Enforces the type invariants: finite reading values, nonempty unit,
// nonnegative timestamp. Throws MalformedPayload.
void validate(const Message& msg);

nlohmann::json to_json(const SensorReading& reading);
SensorReading reading_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Message& msg);
Message message_from_json(const nlohmann::json& j);

// Detail convention for errors that answer a specific request: a JSON object
// carrying the request id, so the broker can relay the error to the right
// requester and the requester can match it to its pending query.
std::string correlated_detail(std::uint64_t request_id, const std::string& note);
std::optional<std::uint64_t> request_id_from_detail(const std::string& detail);

} // namespace senserelay::proto
