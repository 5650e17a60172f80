#pragma once

#include <optional>
#include <string_view>

#include "senserelay/model/params.hpp"

namespace senserelay::model {

// Components of the client/server execution-time model.
// t_cs is the sum of the other three by construction.
struct TimeBreakdown {
    double t_trans = 0.0; // data transfer: p * s_f / v_n
    double t_oh = 0.0;    // file-access overhead: 2 * p * o_f (one read + one write)
    double t_proc = 0.0;  // processing: p * s_f / v_d
    double t_cs = 0.0;    // total

    bool operator==(const TimeBreakdown&) const = default;
};

double transfer_time(const TimeParams& tp);
double overhead_time(const TimeParams& tp);
double processing_time(const TimeParams& tp);
TimeBreakdown total_execution_time(const TimeParams& tp);

// Affine transfer-energy laws: c * size + d.
double energy_tx(double size_bytes, const EnergyParams& ep);
double energy_rx(double size_bytes, const EnergyParams& ep);

// Overhead processing energy: c_proc * size. For file-access overhead the
// size argument is the equivalent data size s_e * o_f.
double energy_overhead(double size_bytes, const EnergyParams& ep);

// The published total-energy formula's receive term carries no size factor,
// which is dimensionally inconsistent with the per-transfer receive law.
// Both readings are implemented; `corrected` applies the receive law at
// size s_f and is the default everywhere.
enum class EnergyVariant {
    literal,   // per node: (c_tx*s_f + d_tx) + (c_rx + d_rx) + 2*c_proc*s_e*o_f
    corrected, // per node: (c_tx*s_f + d_tx) + (c_rx*s_f + d_rx) + 2*c_proc*s_e*o_f
};

std::string_view to_string(EnergyVariant variant);
std::optional<EnergyVariant> energy_variant_from_string(std::string_view name);

// Total energy for p client nodes under the chosen variant.
// Exact identity: corrected - literal == p * c_rx * (s_f - 1).
double total_energy_cs(const TimeParams& tp, const EnergyParams& ep,
                       EnergyVariant variant = EnergyVariant::corrected);

} // namespace senserelay::model
