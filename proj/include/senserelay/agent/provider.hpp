#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "senserelay/clock.hpp"
#include "senserelay/proto/message.hpp"

namespace senserelay::agent {

// Source of sensor samples. read() returns nullopt for a kind the provider
// cannot serve, which the agent reports as an unsupported-sensor error.
// Reads must be deterministic given (provider state, kind, now).
class SensorProvider {
public:
    virtual ~SensorProvider() = default;

    virtual std::optional<proto::SensorReading> read(proto::SensorKind kind, EpochMs now) = 0;

    // Stamped into every reading as its origin; the agent sets this to its
    // own node id at startup.
    void set_origin(const proto::NodeId& origin) { origin_ = origin; }
    const proto::NodeId& origin() const { return origin_; }

protected:
    proto::NodeId origin_;
};

// Fixed value per kind.
class ConstantProvider final : public SensorProvider {
public:
    void set(proto::SensorKind kind, proto::SensorValue value, std::string unit);
    std::optional<proto::SensorReading> read(proto::SensorKind kind, EpochMs now) override;

private:
    std::map<proto::SensorKind, std::pair<proto::SensorValue, std::string>> values_;
};

// Seeded bounded random walk per kind; equal seeds produce equal sequences.
// The walk advances one step per read and is driven by a counter-based
// stream, so it does not depend on wall time.
class SyntheticProvider final : public SensorProvider {
public:
    explicit SyntheticProvider(std::uint64_t seed) : seed_(seed) {}
    std::optional<proto::SensorReading> read(proto::SensorKind kind, EpochMs now) override;

private:
    std::uint64_t seed_;
    struct Walk {
        double a = 0.0;
        double b = 0.0; // second axis for location
        std::uint64_t step = 0;
        bool started = false;
    };
    std::map<proto::SensorKind, Walk> walks_;
};

// Replays a timestamped CSV (header: timestamp_ms,kind,value,unit, rows
// sorted by timestamp). read() returns the last sample with timestamp <= now;
// before the first sample the kind counts as unsupported. Malformed rows are
// a construction error, never skipped.
class TraceReplayProvider final : public SensorProvider {
public:
    explicit TraceReplayProvider(const std::string& csv_path);
    std::optional<proto::SensorReading> read(proto::SensorKind kind, EpochMs now) override;

private:
    struct Sample {
        EpochMs timestamp_ms;
        proto::SensorValue value;
        std::string unit;
    };
    std::map<proto::SensorKind, std::vector<Sample>> samples_;
};

// Provider spec mini-language:
//   constant:<kind>=<value>:<unit>[,<kind>=<value>:<unit>...]
//   synthetic[:seed=N]
//   trace:<path>   (also accepts trace=<path>)
// Location values are written "lat;lon". Throws InvalidParams on a bad spec.
std::shared_ptr<SensorProvider> parse_provider_spec(const std::string& spec);

} // namespace senserelay::agent
