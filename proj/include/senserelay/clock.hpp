#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>

namespace senserelay {

using EpochMs = std::int64_t;

// Time source. Everything that reasons about liveness or timestamps takes a
// Clock so tests can drive time explicitly.
class Clock {
public:
    virtual ~Clock() = default;
    virtual EpochMs now() const = 0;
};

class SystemClock final : public Clock {
public:
    EpochMs now() const override {
        using namespace std::chrono;
        return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
    }
};

// Manually advanced clock for deterministic tests. No sleeps required.
class ManualClock final : public Clock {
public:
    explicit ManualClock(EpochMs start = 0) : now_(start) {}

    EpochMs now() const override { return now_.load(); }
    void set(EpochMs t) { now_.store(t); }
    void advance(EpochMs delta) { now_.fetch_add(delta); }

private:
    std::atomic<EpochMs> now_;
};

} // namespace senserelay
