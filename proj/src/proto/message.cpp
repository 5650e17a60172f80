#include "senserelay/proto/message.hpp"

#include <cmath>

#include "senserelay/errors.hpp"

namespace senserelay::proto {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end()) {
        throw MalformedPayload(std::string("missing field '") + field + "'");
    }
    return *it;
}

std::string get_string(const json& j, const char* field) {
    const json& v = require(j, field);
    if (!v.is_string()) throw MalformedPayload(std::string("field '") + field + "' must be a string");
    return v.get<std::string>();
}

std::uint64_t get_u64(const json& j, const char* field) {
    const json& v = require(j, field);
    if (!v.is_number_unsigned()) {
        throw MalformedPayload(std::string("field '") + field + "' must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

NodeId get_node(const json& j, const char* field) {
    return NodeId::parse(get_string(j, field));
}

SensorKind get_kind(const json& j, const char* field) {
    auto kind = sensor_kind_from_string(get_string(j, field));
    if (!kind) throw MalformedPayload("unknown sensor kind in field '" + std::string(field) + "'");
    return *kind;
}

double finite_number(const json& v, const char* what) {
    if (!v.is_number()) throw MalformedPayload(std::string(what) + " must be a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) throw MalformedPayload(std::string(what) + " must be finite");
    return d;
}

void check_reading(const SensorReading& r) {
    if (const double* scalar = std::get_if<double>(&r.value)) {
        if (!std::isfinite(*scalar)) throw MalformedPayload("reading value must be finite");
    } else {
        const auto& pair = std::get<std::array<double, 2>>(r.value);
        if (!std::isfinite(pair[0]) || !std::isfinite(pair[1])) {
            throw MalformedPayload("reading value must be finite");
        }
    }
    if (r.unit.empty()) throw MalformedPayload("reading unit must be nonempty");
    if (r.timestamp_ms < 0) throw MalformedPayload("reading timestamp must be nonnegative");
}

} // namespace

std::string_view to_string(SensorKind kind) {
    switch (kind) {
        case SensorKind::temperature: return "temperature";
        case SensorKind::location: return "location";
        case SensorKind::accelerometer: return "accelerometer";
        case SensorKind::light: return "light";
        case SensorKind::proximity: return "proximity";
        case SensorKind::microphone_level: return "microphone-level";
    }
    return "unknown";
}

std::optional<SensorKind> sensor_kind_from_string(std::string_view name) {
    for (SensorKind kind : kAllSensorKinds) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

std::string_view type_name(const Message& msg) {
    struct Visitor {
        std::string_view operator()(const Register&) const { return "register"; }
        std::string_view operator()(const RegisterAck&) const { return "register-ack"; }
        std::string_view operator()(const Heartbeat&) const { return "heartbeat"; }
        std::string_view operator()(const Query&) const { return "query"; }
        std::string_view operator()(const QueryForward&) const { return "query-forward"; }
        std::string_view operator()(const Response&) const { return "response"; }
        std::string_view operator()(const Unavailable&) const { return "unavailable"; }
        std::string_view operator()(const ErrorMsg&) const { return "error"; }
    };
    return std::visit(Visitor{}, msg);
}

void validate(const Message& msg) {
    if (const auto* resp = std::get_if<Response>(&msg)) {
        check_reading(resp->reading);
    }
}

json to_json(const SensorReading& reading) {
    json j;
    j["kind"] = std::string(to_string(reading.kind));
    if (const double* scalar = std::get_if<double>(&reading.value)) {
        j["value"] = *scalar;
    } else {
        const auto& pair = std::get<std::array<double, 2>>(reading.value);
        j["value"] = json::array({pair[0], pair[1]});
    }
    j["unit"] = reading.unit;
    j["timestamp_ms"] = reading.timestamp_ms;
    j["origin"] = reading.origin.value();
    return j;
}

SensorReading reading_from_json(const json& j) {
    if (!j.is_object()) throw MalformedPayload("reading must be an object");
    SensorReading r;
    r.kind = get_kind(j, "kind");
    const json& value = require(j, "value");
    if (value.is_array()) {
        if (value.size() != 2) throw MalformedPayload("location value must be [lat, lon]");
        r.value = std::array<double, 2>{finite_number(value[0], "reading value"),
                                        finite_number(value[1], "reading value")};
    } else {
        r.value = finite_number(value, "reading value");
    }
    r.unit = get_string(j, "unit");
    const json& ts = require(j, "timestamp_ms");
    if (!ts.is_number_integer()) throw MalformedPayload("timestamp_ms must be an integer");
    r.timestamp_ms = ts.get<EpochMs>();
    r.origin = get_node(j, "origin");
    check_reading(r);
    return r;
}

json to_json(const Message& msg) {
    json j;
    j["type"] = std::string(type_name(msg));
    struct Visitor {
        json& j;
        void operator()(const Register& m) const {
            j["node"] = m.node.value();
            j["phone"] = m.phone;
        }
        void operator()(const RegisterAck& m) const { j["node"] = m.node.value(); }
        void operator()(const Heartbeat& m) const { j["node"] = m.node.value(); }
        void operator()(const Query& m) const {
            j["request_id"] = m.request_id;
            j["requester"] = m.requester.value();
            j["target"] = m.target.value();
            j["kind"] = std::string(to_string(m.kind));
        }
        void operator()(const QueryForward& m) const {
            j["request_id"] = m.request_id;
            j["requester"] = m.requester.value();
            j["target"] = m.target.value();
            j["kind"] = std::string(to_string(m.kind));
        }
        void operator()(const Response& m) const {
            j["request_id"] = m.request_id;
            j["requester"] = m.requester.value();
            j["target"] = m.target.value();
            j["reading"] = to_json(m.reading);
        }
        void operator()(const Unavailable& m) const {
            j["request_id"] = m.request_id;
            j["target"] = m.target.value();
            j["reason"] = m.reason;
        }
        void operator()(const ErrorMsg& m) const {
            j["code"] = m.code;
            j["detail"] = m.detail;
        }
    };
    std::visit(Visitor{j}, msg);
    return j;
}

Message message_from_json(const json& j) {
    if (!j.is_object()) throw MalformedPayload("message must be a JSON object");
    const std::string type = get_string(j, "type");

    Message msg;
    if (type == "register") {
        msg = Register{get_node(j, "node"), get_string(j, "phone")};
    } else if (type == "register-ack") {
        msg = RegisterAck{get_node(j, "node")};
    } else if (type == "heartbeat") {
        msg = Heartbeat{get_node(j, "node")};
    } else if (type == "query") {
        msg = Query{get_u64(j, "request_id"), get_node(j, "requester"), get_node(j, "target"),
                    get_kind(j, "kind")};
    } else if (type == "query-forward") {
        msg = QueryForward{get_u64(j, "request_id"), get_node(j, "requester"),
                           get_node(j, "target"), get_kind(j, "kind")};
    } else if (type == "response") {
        msg = Response{get_u64(j, "request_id"), get_node(j, "requester"), get_node(j, "target"),
                       reading_from_json(require(j, "reading"))};
    } else if (type == "unavailable") {
        msg = Unavailable{get_u64(j, "request_id"), get_node(j, "target"),
                          get_string(j, "reason")};
    } else if (type == "error") {
        msg = ErrorMsg{get_string(j, "code"), get_string(j, "detail")};
    } else {
        throw MalformedPayload("unknown message type '" + type + "'");
    }
    validate(msg);
    return msg;
}

std::string correlated_detail(std::uint64_t request_id, const std::string& note) {
    json j{{"request_id", request_id}};
    if (!note.empty()) j["note"] = note;
    return j.dump();
}

std::optional<std::uint64_t> request_id_from_detail(const std::string& detail) {
    try {
        const json j = json::parse(detail);
        auto it = j.find("request_id");
        if (it != j.end() && it->is_number_unsigned()) return it->get<std::uint64_t>();
    } catch (const json::exception&) {
    }
    return std::nullopt;
}

} // namespace senserelay::proto
