#include "senserelay/agent/provider.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "senserelay/errors.hpp"
#include "senserelay/util/rng.hpp"
#include "senserelay/util/strings.hpp"

namespace senserelay::agent {

namespace {

using proto::SensorKind;
using proto::SensorValue;

// Walk parameters per kind: start, max step, clamp range, unit.
struct WalkSpec {
    double start;
    double step;
    double lo;
    double hi;
    const char* unit;
};

WalkSpec walk_spec(SensorKind kind) {
    switch (kind) {
        case SensorKind::temperature: return {20.0, 0.1, -40.0, 60.0, "celsius"};
        case SensorKind::location: return {0.0, 0.0001, -90.0, 90.0, "deg"};
        case SensorKind::accelerometer: return {0.0, 0.05, -20.0, 20.0, "m/s^2"};
        case SensorKind::light: return {300.0, 10.0, 0.0, 10000.0, "lux"};
        case SensorKind::proximity: return {5.0, 0.5, 0.0, 10.0, "cm"};
        case SensorKind::microphone_level: return {40.0, 2.0, 0.0, 120.0, "dB"};
    }
    return {0.0, 0.0, 0.0, 0.0, ""};
}

std::uint64_t kind_index(SensorKind kind) {
    return static_cast<std::uint64_t>(kind);
}

// "12.5" or "lat;lon" for location samples.
SensorValue parse_value(const std::string& text) {
    const std::size_t semi = text.find(';');
    if (semi == std::string::npos) return parse_double(text, "value");
    return std::array<double, 2>{parse_double(text.substr(0, semi), "latitude"),
                                 parse_double(text.substr(semi + 1), "longitude")};
}

} // namespace

void ConstantProvider::set(SensorKind kind, SensorValue value, std::string unit) {
    values_[kind] = {value, std::move(unit)};
}

std::optional<proto::SensorReading> ConstantProvider::read(SensorKind kind, EpochMs now) {
    auto it = values_.find(kind);
    if (it == values_.end()) return std::nullopt;
    return proto::SensorReading{kind, it->second.first, it->second.second, now, origin_};
}

std::optional<proto::SensorReading> SyntheticProvider::read(SensorKind kind, EpochMs now) {
    const WalkSpec spec = walk_spec(kind);
    Walk& walk = walks_[kind];
    if (!walk.started) {
        walk.a = spec.start;
        walk.b = kind == SensorKind::location ? 0.0 : spec.start;
        walk.started = true;
    }
    auto advance = [&](double value, std::uint64_t axis, double lo, double hi) {
        const double u =
            counter_uniform01({seed_, kind_index(kind), walk.step, axis});
        return std::clamp(value + (2.0 * u - 1.0) * spec.step, lo, hi);
    };
    if (kind == SensorKind::location) {
        walk.a = advance(walk.a, 0, -90.0, 90.0);
        walk.b = advance(walk.b, 1, -180.0, 180.0);
    } else {
        walk.a = advance(walk.a, 0, spec.lo, spec.hi);
    }
    ++walk.step;

    SensorValue value = kind == SensorKind::location
                            ? SensorValue(std::array<double, 2>{walk.a, walk.b})
                            : SensorValue(walk.a);
    return proto::SensorReading{kind, value, spec.unit, now, origin_};
}

TraceReplayProvider::TraceReplayProvider(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw Error("cannot open trace file " + csv_path);

    std::string line;
    if (!std::getline(in, line) || line != "timestamp_ms,kind,value,unit") {
        throw Error("trace " + csv_path + ": header must be 'timestamp_ms,kind,value,unit'");
    }
    std::size_t line_no = 1;
    EpochMs previous_ts = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        const std::string where = "trace " + csv_path + " line " + std::to_string(line_no);
        if (fields.size() != 4) throw Error(where + ": expected 4 fields");
        EpochMs ts = 0;
        SensorValue value;
        try {
            ts = static_cast<EpochMs>(parse_u64(fields[0], "timestamp_ms"));
            value = parse_value(fields[2]);
        } catch (const InvalidParams& e) {
            throw Error(where + ": " + e.what());
        }
        const auto kind = proto::sensor_kind_from_string(fields[1]);
        if (!kind) throw Error(where + ": unknown kind '" + fields[1] + "'");
        if (fields[3].empty()) throw Error(where + ": unit must be nonempty");
        if (ts < previous_ts) throw Error(where + ": rows must be sorted by timestamp");
        previous_ts = ts;
        samples_[*kind].push_back(Sample{ts, value, fields[3]});
    }
}

std::optional<proto::SensorReading> TraceReplayProvider::read(SensorKind kind, EpochMs now) {
    auto it = samples_.find(kind);
    if (it == samples_.end()) return std::nullopt;
    const auto& rows = it->second;
    // Last sample with timestamp <= now.
    auto after = std::upper_bound(rows.begin(), rows.end(), now,
                                  [](EpochMs t, const Sample& s) { return t < s.timestamp_ms; });
    if (after == rows.begin()) return std::nullopt; // nothing recorded yet
    const Sample& sample = *std::prev(after);
    return proto::SensorReading{kind, sample.value, sample.unit, sample.timestamp_ms, origin_};
}

std::shared_ptr<SensorProvider> parse_provider_spec(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string head = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (head == "constant") {
        auto provider = std::make_shared<ConstantProvider>();
        if (rest.empty()) throw InvalidParams("constant provider needs kind=value:unit entries");
        for (const std::string& entry : split(rest, ',')) {
            // <kind>=<value>:<unit>
            const std::size_t eq = entry.find('=');
            const std::size_t unit_sep = entry.rfind(':');
            if (eq == std::string::npos || unit_sep == std::string::npos || unit_sep <= eq + 1 ||
                unit_sep + 1 >= entry.size()) {
                throw InvalidParams("bad constant entry '" + entry + "', want kind=value:unit");
            }
            const auto kind = proto::sensor_kind_from_string(entry.substr(0, eq));
            if (!kind) throw InvalidParams("unknown sensor kind in '" + entry + "'");
            provider->set(*kind, parse_value(entry.substr(eq + 1, unit_sep - eq - 1)),
                          entry.substr(unit_sep + 1));
        }
        return provider;
    }
    if (head == "synthetic") {
        std::uint64_t seed = 0;
        if (!rest.empty()) {
            if (!rest.starts_with("seed=")) {
                throw InvalidParams("synthetic provider accepts only seed=N, got '" + rest + "'");
            }
            seed = parse_u64(rest.substr(5), "seed");
        }
        return std::make_shared<SyntheticProvider>(seed);
    }
    if (head == "trace") {
        if (rest.empty()) throw InvalidParams("trace provider needs a file path");
        return std::make_shared<TraceReplayProvider>(rest);
    }
    if (spec.starts_with("trace=")) {
        return std::make_shared<TraceReplayProvider>(spec.substr(6));
    }
    throw InvalidParams("unknown provider spec '" + spec + "'");
}

} // namespace senserelay::agent
