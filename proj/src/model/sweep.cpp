#include "senserelay/model/sweep.hpp"

#include "senserelay/errors.hpp"
#include "senserelay/util/strings.hpp"

namespace senserelay::model {

std::vector<SweepRow> sweep(const SweepGrid& grid, const EnergyParams& ep, EnergyVariant variant) {
    if (grid.p.empty() || grid.s_f.empty() || grid.v_n.empty() || grid.v_d.empty() ||
        grid.o_f.empty()) {
        throw InvalidParams("sweep grid has an empty axis");
    }
    validate(ep);

    std::vector<SweepRow> rows;
    rows.reserve(grid.p.size() * grid.s_f.size() * grid.v_n.size() * grid.v_d.size() *
                 grid.o_f.size());
    for (std::uint32_t p : grid.p) {
        for (double s_f : grid.s_f) {
            for (double v_n : grid.v_n) {
                for (double v_d : grid.v_d) {
                    for (double o_f : grid.o_f) {
                        const TimeParams tp{p, s_f, v_n, v_d, o_f};
                        try {
                            validate(tp);
                        } catch (const InvalidParams& e) {
                            throw InvalidParams("sweep row (p=" + std::to_string(p) +
                                                ", s_f=" + format_double(s_f) +
                                                ", v_n=" + format_double(v_n) +
                                                ", v_d=" + format_double(v_d) +
                                                ", o_f=" + format_double(o_f) + "): " + e.what());
                        }
                        rows.push_back(
                            SweepRow{tp, total_execution_time(tp), total_energy_cs(tp, ep, variant)});
                    }
                }
            }
        }
    }
    return rows;
}

std::string sweep_csv_header() {
    return "p,s_f,v_n,v_d,o_f,t_trans,t_oh,t_proc,t_cs,e_cs,variant";
}

std::string sweep_row_csv(const SweepRow& row, EnergyVariant variant) {
    std::string out;
    out += std::to_string(row.tp.p);
    out += ',';
    out += format_double(row.tp.s_f);
    out += ',';
    out += format_double(row.tp.v_n);
    out += ',';
    out += format_double(row.tp.v_d);
    out += ',';
    out += format_double(row.tp.o_f);
    out += ',';
    out += format_double(row.time.t_trans);
    out += ',';
    out += format_double(row.time.t_oh);
    out += ',';
    out += format_double(row.time.t_proc);
    out += ',';
    out += format_double(row.time.t_cs);
    out += ',';
    out += format_double(row.e_cs);
    out += ',';
    out += to_string(variant);
    return out;
}

nlohmann::json sweep_row_json(const SweepRow& row, EnergyVariant variant) {
    return nlohmann::json{
        {"p", row.tp.p},
        {"s_f", row.tp.s_f},
        {"v_n", row.tp.v_n},
        {"v_d", row.tp.v_d},
        {"o_f", row.tp.o_f},
        {"t_trans", row.time.t_trans},
        {"t_oh", row.time.t_oh},
        {"t_proc", row.time.t_proc},
        {"t_cs", row.time.t_cs},
        {"e_cs", row.e_cs},
        {"variant", std::string(to_string(variant))},
    };
}

} // namespace senserelay::model
