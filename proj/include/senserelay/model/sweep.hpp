#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "senserelay/model/perf.hpp"

namespace senserelay::model {

// One list of candidate values per time parameter. Empty axes are invalid:
// a parameter held fixed is a singleton list.
struct SweepGrid {
    std::vector<std::uint32_t> p;
    std::vector<double> s_f;
    std::vector<double> v_n;
    std::vector<double> v_d;
    std::vector<double> o_f;

    static SweepGrid singleton(const TimeParams& tp) {
        return SweepGrid{{tp.p}, {tp.s_f}, {tp.v_n}, {tp.v_d}, {tp.o_f}};
    }
};

struct SweepRow {
    TimeParams tp;
    TimeBreakdown time;
    double e_cs = 0.0;
};

// Cartesian product in declaration order (p outermost, o_f innermost).
// Every grid value is validated; the thrown InvalidParams names the axis.
std::vector<SweepRow> sweep(const SweepGrid& grid, const EnergyParams& ep, EnergyVariant variant);

// CSV / JSON-lines emission with identical fields.
std::string sweep_csv_header();
std::string sweep_row_csv(const SweepRow& row, EnergyVariant variant);
nlohmann::json sweep_row_json(const SweepRow& row, EnergyVariant variant);

} // namespace senserelay::model
