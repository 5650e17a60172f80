#include "senserelay/sim/simulator.hpp"

#include <cmath>
#include <limits>

#include "senserelay/errors.hpp"
#include "senserelay/util/rng.hpp"
#include "senserelay/util/strings.hpp"

namespace senserelay::sim {

namespace {

constexpr double kMaxExactInteger = 9007199254740992.0; // 2^53

void require_whole_bytes(double v, const char* name) {
    if (!(std::isfinite(v) && v >= 0.0 && v == std::floor(v) && v <= kMaxExactInteger)) {
        throw InvalidParams(std::string(name) + " must be a whole number of bytes <= 2^53, got " +
                            format_double(v));
    }
}

double relative(double abs, double reference) {
    if (reference != 0.0) return abs / std::fabs(reference);
    return abs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

ReplicationStats simulate_replication(const SimConfig& cfg, std::uint64_t rep) {
    const auto& tp = cfg.tp;
    const auto& ep = cfg.ep;
    const double q = cfg.loss_rate;

    const auto file_bytes = static_cast<std::uint64_t>(tp.s_f);
    const auto chunk_bytes = static_cast<std::uint64_t>(cfg.chunk_size);
    const std::uint64_t n_chunks =
        file_bytes == 0 ? 0 : (file_bytes + chunk_bytes - 1) / chunk_bytes;

    ReplicationStats stats;
    stats.client_transfer_time.reserve(tp.p);
    stats.client_failed.reserve(tp.p);

    double clock = 0.0;
    for (std::uint32_t client = 0; client < tp.p; ++client) {
        double attempted_bytes = 0.0;
        double delivered_bytes = 0.0;
        bool failed = false;

        for (std::uint64_t chunk = 0; chunk < n_chunks && !failed; ++chunk) {
            const std::uint64_t bytes_u =
                (chunk + 1 < n_chunks) ? chunk_bytes : file_bytes - chunk_bytes * (n_chunks - 1);
            const auto bytes = static_cast<double>(bytes_u);

            std::uint64_t attempt = 0;
            while (true) {
                ++attempt;
                ++stats.attempts;
                attempted_bytes += bytes;
                clock += bytes / tp.v_n; // channel occupied by this attempt
                const double u = counter_uniform01({cfg.seed, rep, client, chunk, attempt});
                if (u >= q) break; // chunk delivered
                if (cfg.max_retries && attempt >= *cfg.max_retries + 1ULL) {
                    failed = true;
                    break;
                }
            }
            stats.retransmissions += attempt - 1;
            if (!failed) {
                delivered_bytes += bytes;
                ++stats.chunks_completed;
            }
        }

        stats.client_transfer_time.push_back(attempted_bytes / tp.v_n);
        stats.client_failed.push_back(failed);

        // Radio costs: fixed terms once per file session, byte terms on every
        // byte put on the air, retransmissions included.
        double energy = model::energy_tx(attempted_bytes, ep) + model::energy_rx(attempted_bytes, ep);
        if (!failed) {
            clock += tp.o_f;           // server stores the received file
            clock += tp.s_f / tp.v_d;  // server processes it
            clock += tp.o_f;           // server writes the result
            energy += 2.0 * model::energy_overhead(ep.s_e * tp.o_f, ep);
            stats.bytes_delivered += delivered_bytes;
        }
        stats.energy += energy;
    }
    stats.total_time = clock;
    return stats;
}

} // namespace

void validate(const SimConfig& cfg) {
    model::validate(cfg.tp);
    model::validate(cfg.ep);
    require_whole_bytes(cfg.tp.s_f, "s_f");
    require_whole_bytes(cfg.chunk_size, "chunk_size");
    if (cfg.chunk_size <= 0.0) throw InvalidParams("chunk_size must be positive");
    if (cfg.tp.s_f > 0.0 && cfg.chunk_size > cfg.tp.s_f) {
        throw InvalidParams("chunk_size must not exceed s_f");
    }
    if (!(std::isfinite(cfg.loss_rate) && cfg.loss_rate >= 0.0 && cfg.loss_rate < 1.0)) {
        throw InvalidParams("loss_rate must lie in [0, 1)");
    }
    if (cfg.replications == 0) throw InvalidParams("replications must be positive");
}

SimResult run_sim(const SimConfig& cfg) {
    validate(cfg);

    SimResult res;
    res.config = cfg;
    res.replications.reserve(cfg.replications);

    double transfer_sum = 0.0;
    std::uint64_t transfer_count = 0;
    double total_sum = 0.0;
    double energy_sum = 0.0;
    std::uint64_t attempts_total = 0;
    std::uint64_t chunks_total = 0;

    for (std::uint32_t rep = 0; rep < cfg.replications; ++rep) {
        ReplicationStats stats = simulate_replication(cfg, rep);
        for (std::size_t c = 0; c < stats.client_transfer_time.size(); ++c) {
            if (stats.client_failed[c]) {
                ++res.failed_clients;
                continue;
            }
            transfer_sum += stats.client_transfer_time[c];
            ++transfer_count;
            res.max_transfer_time = std::max(res.max_transfer_time, stats.client_transfer_time[c]);
        }
        total_sum += stats.total_time;
        energy_sum += stats.energy;
        attempts_total += stats.attempts;
        chunks_total += stats.chunks_completed;
        res.max_total_time = std::max(res.max_total_time, stats.total_time);
        res.replications.push_back(std::move(stats));
    }

    if (transfer_count > 0) res.mean_transfer_time = transfer_sum / static_cast<double>(transfer_count);
    res.mean_total_time = total_sum / static_cast<double>(cfg.replications);
    res.mean_energy = energy_sum / static_cast<double>(cfg.replications);
    if (chunks_total > 0) {
        res.mean_attempts_per_chunk =
            static_cast<double>(attempts_total) / static_cast<double>(chunks_total);
    }
    res.deviation = compare_to_model(res, cfg.tp);
    return res;
}

DeviationReport compare_to_model(const SimResult& res, const model::TimeParams& tp) {
    if (res.config.tp != tp) {
        throw MismatchedParams("result was produced with different time parameters");
    }
    if (res.replications.empty()) {
        throw InvalidParams("result holds no replications; nothing to compare");
    }

    DeviationReport report;
    report.model_time = model::total_execution_time(tp);
    report.model_energy =
        model::total_energy_cs(tp, res.config.ep, model::EnergyVariant::corrected);

    report.per_replication.reserve(res.replications.size());
    double time_rel_sum = 0.0, time_abs_sum = 0.0;
    double energy_rel_sum = 0.0, energy_abs_sum = 0.0;
    for (const ReplicationStats& rep : res.replications) {
        DeviationEntry e;
        e.time_abs = std::fabs(rep.total_time - report.model_time.t_cs);
        e.time_rel = relative(e.time_abs, report.model_time.t_cs);
        e.energy_abs = std::fabs(rep.energy - report.model_energy);
        e.energy_rel = relative(e.energy_abs, report.model_energy);
        time_abs_sum += e.time_abs;
        time_rel_sum += e.time_rel;
        energy_abs_sum += e.energy_abs;
        energy_rel_sum += e.energy_rel;
        report.max_time_rel = std::max(report.max_time_rel, e.time_rel);
        report.max_energy_rel = std::max(report.max_energy_rel, e.energy_rel);
        report.per_replication.push_back(e);
    }
    const auto n = static_cast<double>(res.replications.size());
    report.mean = DeviationEntry{time_abs_sum / n, time_rel_sum / n, energy_abs_sum / n,
                                 energy_rel_sum / n};
    report.aggregate_time_rel =
        relative(std::fabs(res.mean_total_time - report.model_time.t_cs), report.model_time.t_cs);
    report.aggregate_energy_rel =
        relative(std::fabs(res.mean_energy - report.model_energy), report.model_energy);
    return report;
}

nlohmann::json to_json(const SimConfig& cfg) {
    nlohmann::json j{
        {"p", cfg.tp.p},
        {"s_f", cfg.tp.s_f},
        {"v_n", cfg.tp.v_n},
        {"v_d", cfg.tp.v_d},
        {"o_f", cfg.tp.o_f},
        {"c_tx", cfg.ep.c_tx},
        {"d_tx", cfg.ep.d_tx},
        {"c_rx", cfg.ep.c_rx},
        {"d_rx", cfg.ep.d_rx},
        {"c_proc", cfg.ep.c_proc},
        {"s_e", cfg.ep.s_e},
        {"chunk_size", cfg.chunk_size},
        {"loss_rate", cfg.loss_rate},
        {"seed", cfg.seed},
        {"replications", cfg.replications},
    };
    if (cfg.max_retries) {
        j["max_retries"] = *cfg.max_retries;
    } else {
        j["max_retries"] = nullptr;
    }
    return j;
}

namespace {

nlohmann::json to_json(const DeviationEntry& e) {
    return nlohmann::json{{"time_abs", e.time_abs},
                          {"time_rel", e.time_rel},
                          {"energy_abs", e.energy_abs},
                          {"energy_rel", e.energy_rel}};
}

} // namespace

nlohmann::json to_json(const SimResult& res) {
    nlohmann::json reps = nlohmann::json::array();
    for (const ReplicationStats& r : res.replications) {
        reps.push_back(nlohmann::json{
            {"client_transfer_time", r.client_transfer_time},
            {"client_failed", r.client_failed},
            {"total_time", r.total_time},
            {"energy", r.energy},
            {"attempts", r.attempts},
            {"retransmissions", r.retransmissions},
            {"chunks_completed", r.chunks_completed},
            {"bytes_delivered", r.bytes_delivered},
        });
    }
    nlohmann::json dev_reps = nlohmann::json::array();
    for (const DeviationEntry& e : res.deviation.per_replication) dev_reps.push_back(to_json(e));

    return nlohmann::json{
        {"config", to_json(res.config)},
        {"replications", std::move(reps)},
        {"mean_transfer_time", res.mean_transfer_time},
        {"max_transfer_time", res.max_transfer_time},
        {"mean_total_time", res.mean_total_time},
        {"max_total_time", res.max_total_time},
        {"mean_energy", res.mean_energy},
        {"mean_attempts_per_chunk", res.mean_attempts_per_chunk},
        {"failed_clients", res.failed_clients},
        {"deviation",
         nlohmann::json{
             {"model_t_trans", res.deviation.model_time.t_trans},
             {"model_t_oh", res.deviation.model_time.t_oh},
             {"model_t_proc", res.deviation.model_time.t_proc},
             {"model_t_cs", res.deviation.model_time.t_cs},
             {"model_energy", res.deviation.model_energy},
             {"per_replication", std::move(dev_reps)},
             {"mean", to_json(res.deviation.mean)},
             {"max_time_rel", res.deviation.max_time_rel},
             {"max_energy_rel", res.deviation.max_energy_rel},
             {"aggregate_time_rel", res.deviation.aggregate_time_rel},
             {"aggregate_energy_rel", res.deviation.aggregate_energy_rel},
         }},
    };
}

std::string aggregate_csv_header() {
    return "q,p,s_f,chunk,replications,mean_t,max_t,t_cs_model,rel_dev,e_sim,e_model,failures";
}

std::string aggregate_csv_row(const SimResult& res) {
    std::string out;
    out += format_double(res.config.loss_rate);
    out += ',';
    out += std::to_string(res.config.tp.p);
    out += ',';
    out += format_double(res.config.tp.s_f);
    out += ',';
    out += format_double(res.config.chunk_size);
    out += ',';
    out += std::to_string(res.config.replications);
    out += ',';
    out += format_double(res.mean_total_time);
    out += ',';
    out += format_double(res.max_total_time);
    out += ',';
    out += format_double(res.deviation.model_time.t_cs);
    out += ',';
    out += format_double(res.deviation.aggregate_time_rel);
    out += ',';
    out += format_double(res.mean_energy);
    out += ',';
    out += format_double(res.deviation.model_energy);
    out += ',';
    out += std::to_string(res.failed_clients);
    return out;
}

} // namespace senserelay::sim
