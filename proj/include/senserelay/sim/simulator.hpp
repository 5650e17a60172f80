#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "senserelay/model/perf.hpp"

namespace senserelay::sim {

// Discrete-event model of p clients pushing their sensor file to one
// processing center over a lossy shared channel. Files are sent in chunks;
// each chunk transmission independently fails with probability `loss_rate`
// and is retransmitted. The channel and the server form one FIFO pipeline:
// a client transmits only when the server is idle, so with loss_rate = 0 the
// total time reduces exactly to the closed-form execution-time model.
struct SimConfig {
    model::TimeParams tp;
    model::EnergyParams ep;
    double chunk_size = 65536;                // bytes per chunk; whole number
    double loss_rate = 0.0;                   // q in [0, 1)
    std::optional<std::uint32_t> max_retries; // nullopt = unlimited
    std::uint64_t seed = 0;
    std::uint32_t replications = 1;

    bool operator==(const SimConfig&) const = default;
};

// Byte counts (tp.s_f, chunk_size) must be whole numbers <= 2^53 so that
// byte accounting is exact in binary64. Throws InvalidParams.
void validate(const SimConfig& cfg);

struct ReplicationStats {
    std::vector<double> client_transfer_time; // channel-busy seconds per client
    std::vector<bool> client_failed;          // chunk exhausted max_retries
    double total_time = 0.0;                  // end of the last server write
    double energy = 0.0;
    std::uint64_t attempts = 0;         // chunk transmissions, retries included
    std::uint64_t retransmissions = 0;  // attempts beyond the first, per chunk
    std::uint64_t chunks_completed = 0; // chunks delivered to the server
    double bytes_delivered = 0.0;       // s_f per successful client, exactly
};

struct DeviationEntry {
    double time_abs = 0.0;
    double time_rel = 0.0;
    double energy_abs = 0.0;
    double energy_rel = 0.0;
};

// Simulation vs the closed-form model (corrected energy variant).
struct DeviationReport {
    model::TimeBreakdown model_time;
    double model_energy = 0.0;
    std::vector<DeviationEntry> per_replication;
    DeviationEntry mean;              // mean of the per-replication entries
    double max_time_rel = 0.0;
    double max_energy_rel = 0.0;
    double aggregate_time_rel = 0.0;   // |mean sim time - model| / model
    double aggregate_energy_rel = 0.0;
};

struct SimResult {
    SimConfig config;
    std::vector<ReplicationStats> replications;

    // Aggregates. Failed clients are excluded from transfer-time means and
    // counted in failed_clients instead.
    double mean_transfer_time = 0.0;
    double max_transfer_time = 0.0;
    double mean_total_time = 0.0;
    double max_total_time = 0.0;
    double mean_energy = 0.0;
    double mean_attempts_per_chunk = 0.0; // attempts per completed chunk
    std::uint64_t failed_clients = 0;

    DeviationReport deviation;
};

// Deterministic: identical config => identical result, bit for bit. The
// random stream is a pure function of (seed, replication, client, chunk,
// attempt), so results do not depend on evaluation order.
SimResult run_sim(const SimConfig& cfg);

// Throws MismatchedParams when `tp` is not the parameter set the result was
// produced with, InvalidParams when the result holds no replications.
DeviationReport compare_to_model(const SimResult& res, const model::TimeParams& tp);

nlohmann::json to_json(const SimConfig& cfg);
nlohmann::json to_json(const SimResult& res);

std::string aggregate_csv_header();
std::string aggregate_csv_row(const SimResult& res);

} // namespace senserelay::sim
