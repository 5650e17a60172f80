#pragma once

#include <cstdint>

namespace senserelay::model {

// Inputs to the execution-time model. Units: bytes, bytes/second, seconds.
struct TimeParams {
    std::uint32_t p = 0; // number of client sensor nodes
    double s_f = 0.0;    // data file size each node transfers, bytes
    double v_n = 1.0;    // network transfer rate, bytes/s (> 0)
    double v_d = 1.0;    // data processing rate, bytes/s (> 0)
    double o_f = 0.0;    // overhead of one file access, seconds

    bool operator==(const TimeParams&) const = default;
};

// Inputs to the energy model. The energy unit is whatever unit the
// coefficients carry; the model is unit-agnostic but self-consistent.
struct EnergyParams {
    double c_tx = 0.0;   // transmit energy per byte
    double d_tx = 0.0;   // fixed transmit cost per transfer session
    double c_rx = 0.0;   // receive energy per byte
    double d_rx = 0.0;   // fixed receive cost per transfer session
    double c_proc = 0.0; // processing energy per byte
    double s_e = 0.0;    // equivalent data size: bytes processed per second of overhead

    bool operator==(const EnergyParams&) const = default;
};

// Throw InvalidParams naming the offending field.
void validate(const TimeParams& tp);
void validate(const EnergyParams& ep);

} // namespace senserelay::model
