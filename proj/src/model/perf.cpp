#include "senserelay/model/perf.hpp"

#include <cmath>
#include <string>

#include "senserelay/errors.hpp"

namespace senserelay::model {

namespace {

void require_finite_nonneg(double v, const char* name) {
    if (!(std::isfinite(v) && v >= 0.0)) {
        throw InvalidParams(std::string(name) + " must be finite and nonnegative, got " +
                            std::to_string(v));
    }
}

void require_positive(double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) {
        throw InvalidParams(std::string(name) + " must be finite and positive, got " +
                            std::to_string(v));
    }
}

} // namespace

void validate(const TimeParams& tp) {
    require_finite_nonneg(tp.s_f, "s_f");
    require_positive(tp.v_n, "v_n");
    require_positive(tp.v_d, "v_d");
    require_finite_nonneg(tp.o_f, "o_f");
}

void validate(const EnergyParams& ep) {
    require_finite_nonneg(ep.c_tx, "c_tx");
    require_finite_nonneg(ep.d_tx, "d_tx");
    require_finite_nonneg(ep.c_rx, "c_rx");
    require_finite_nonneg(ep.d_rx, "d_rx");
    require_finite_nonneg(ep.c_proc, "c_proc");
    require_finite_nonneg(ep.s_e, "s_e");
}

double transfer_time(const TimeParams& tp) {
    validate(tp);
    return static_cast<double>(tp.p) * tp.s_f / tp.v_n;
}

double overhead_time(const TimeParams& tp) {
    validate(tp);
    return 2.0 * static_cast<double>(tp.p) * tp.o_f;
}

double processing_time(const TimeParams& tp) {
    validate(tp);
    return static_cast<double>(tp.p) * tp.s_f / tp.v_d;
}

TimeBreakdown total_execution_time(const TimeParams& tp) {
    TimeBreakdown b;
    b.t_trans = transfer_time(tp);
    b.t_oh = overhead_time(tp);
    b.t_proc = processing_time(tp);
    b.t_cs = b.t_trans + b.t_oh + b.t_proc;
    return b;
}

double energy_tx(double size_bytes, const EnergyParams& ep) {
    validate(ep);
    require_finite_nonneg(size_bytes, "size");
    return ep.c_tx * size_bytes + ep.d_tx;
}

double energy_rx(double size_bytes, const EnergyParams& ep) {
    validate(ep);
    require_finite_nonneg(size_bytes, "size");
    return ep.c_rx * size_bytes + ep.d_rx;
}

double energy_overhead(double size_bytes, const EnergyParams& ep) {
    validate(ep);
    require_finite_nonneg(size_bytes, "size");
    return ep.c_proc * size_bytes;
}

std::string_view to_string(EnergyVariant variant) {
    return variant == EnergyVariant::literal ? "literal" : "corrected";
}

std::optional<EnergyVariant> energy_variant_from_string(std::string_view name) {
    if (name == "literal") return EnergyVariant::literal;
    if (name == "corrected") return EnergyVariant::corrected;
    return std::nullopt;
}

double total_energy_cs(const TimeParams& tp, const EnergyParams& ep, EnergyVariant variant) {
    validate(tp);
    validate(ep);
    const double tx = ep.c_tx * tp.s_f + ep.d_tx;
    const double rx =
        variant == EnergyVariant::corrected ? ep.c_rx * tp.s_f + ep.d_rx : ep.c_rx + ep.d_rx;
    const double oh = 2.0 * (ep.c_proc * ep.s_e * tp.o_f);
    return static_cast<double>(tp.p) * ((tx + rx) + oh);
}

} // namespace senserelay::model
