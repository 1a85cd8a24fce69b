#include "wqed/sweep.hpp"

#include <chrono>
#include <ctime>

#include "wqed/detail/parallel.hpp"
#include "wqed/errors.hpp"
#include "wqed/version.hpp"

namespace wqed {

namespace {

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void validate_axis(const AxisSpec& axis, Flavor flavor) {
    if (axis.count < 2)
        throw InvalidAxis("axis " + std::string(to_string(axis.parameter)) +
                          ": count must be at least 2, got " + std::to_string(axis.count));
    if (!(axis.start < axis.stop))
        throw InvalidAxis("axis " + std::string(to_string(axis.parameter)) +
                          ": start must be below stop");
    if (flavor == Flavor::bare && !applicable_to_bare(axis.parameter))
        throw InvalidAxis("parameter " + std::string(to_string(axis.parameter)) +
                          " does not apply to a bare-atom sweep");
}

using detail::parallel_for;

void evaluate_cell(SweepCell& cell, const CavityParams& p, Flavor flavor) {
    try {
        cell.solution = flavor == Flavor::bare ? bare_amplitudes(p.atom_only())
                                               : cavity_amplitudes(p);
        cell.report = detection_report(cell.solution);
        cell.ok = true;
        cell.status = "ok";
    } catch (const DegenerateDenominator& e) {
        cell.ok = false;
        cell.status = e.what();
    }
}

SweepResult run_sweep(const CavityParams& base, Flavor flavor,
                      std::span<const AxisSpec> axes, SweepOptions options) {
    if (axes.empty() || axes.size() > 2)
        throw InvalidAxis("a sweep takes one or two axes, got " + std::to_string(axes.size()));
    for (const AxisSpec& a : axes) validate_axis(a, flavor);

    SweepResult result;
    result.flavor = flavor;
    result.axes.assign(axes.begin(), axes.end());
    result.base = base;
    result.provenance = current_provenance();

    const std::size_t n0 = axes[0].count;
    const std::size_t n1 = axes.size() == 2 ? axes[1].count : 1;
    result.cells.resize(n0 * n1);

    parallel_for(n0 * n1, options.threads, [&](std::size_t idx) {
        const int i0 = static_cast<int>(idx / n1);
        const int i1 = static_cast<int>(idx % n1);
        CavityParams p = base;
        apply_parameter(p, axes[0].parameter, axis_value(axes[0], i0));
        if (axes.size() == 2) apply_parameter(p, axes[1].parameter, axis_value(axes[1], i1));
        evaluate_cell(result.cells[idx], p, flavor);
    });
    return result;
}

} // namespace

Provenance current_provenance() { return {std::string(kVersion), iso_timestamp()}; }

std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::gamma_q: return "gamma_q";
        case SweepParameter::h: return "h";
        case SweepParameter::V: return "V";
        case SweepParameter::g: return "g";
        case SweepParameter::delta: return "delta";
        case SweepParameter::Gamma_1: return "Gamma1";
        case SweepParameter::delta_c: return "delta_c";
    }
    return "?";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
    if (name == "gamma_q" || name == "gamma-q") return SweepParameter::gamma_q;
    if (name == "h") return SweepParameter::h;
    if (name == "V") return SweepParameter::V;
    if (name == "g") return SweepParameter::g;
    if (name == "delta") return SweepParameter::delta;
    if (name == "Gamma1" || name == "Gamma_1") return SweepParameter::Gamma_1;
    if (name == "delta_c" || name == "delta-c") return SweepParameter::delta_c;
    throw UnknownParameter("unknown sweep parameter '" + std::string(name) + "'");
}

bool applicable_to_bare(SweepParameter p) {
    switch (p) {
        case SweepParameter::gamma_q:
        case SweepParameter::h:
        case SweepParameter::delta:
        case SweepParameter::Gamma_1:
            return true;
        default:
            return false;
    }
}

double axis_value(const AxisSpec& axis, int i) {
    // Endpoint-inclusive linear grid; identical arithmetic for every caller so
    // serial and parallel runs agree bit for bit.
    return axis.start + (axis.stop - axis.start) * static_cast<double>(i) /
                            static_cast<double>(axis.count - 1);
}

void apply_parameter(CavityParams& p, SweepParameter which, double user_value) {
    const double w = to_angular(user_value);
    switch (which) {
        case SweepParameter::gamma_q: p.gamma_q = w; break;
        case SweepParameter::h: p.h = w; break;
        case SweepParameter::V: p.V = w; break;
        case SweepParameter::g: p.g = w; break;
        case SweepParameter::delta: p.delta = w; break;
        case SweepParameter::Gamma_1: p.set_gamma1(w); break;
        case SweepParameter::delta_c: p.delta_c = w; break;
    }
}

SweepResult sweep(const BareParams& base, std::span<const AxisSpec> axes, SweepOptions options) {
    CavityParams padded;
    static_cast<BareParams&>(padded) = base;
    padded.delta_c = padded.gamma_c = padded.V = padded.g = 0.0;
    return run_sweep(padded, Flavor::bare, axes, options);
}

SweepResult sweep(const CavityParams& base, std::span<const AxisSpec> axes, SweepOptions options) {
    return run_sweep(base, Flavor::cavity, axes, options);
}

SweepResult line_scan_fig6(const CavityParams& base, const AxisSpec& v_axis, SweepOptions options) {
    if (v_axis.parameter != SweepParameter::V)
        throw InvalidAxis("the matched-coupling line scan sweeps V only");
    if (base.h != 0.0)
        throw InvalidAxis("the matched-coupling line scan requires h = 0 in the base parameters");
    validate_axis(v_axis, Flavor::cavity);

    SweepResult result;
    result.flavor = Flavor::cavity;
    result.axes = {v_axis};
    result.base = base;
    result.provenance = current_provenance();
    result.cells.resize(static_cast<std::size_t>(v_axis.count));

    parallel_for(result.cells.size(), options.threads, [&](std::size_t idx) {
        CavityParams p = base;
        apply_parameter(p, SweepParameter::V, axis_value(v_axis, static_cast<int>(idx)));
        // Re-match the atom-cavity coupling at every V where the matched value
        // exists; outside that region keep the base coupling.
        if (auto g = matching_report(p).g_opt) p.g = *g;
        evaluate_cell(result.cells[idx], p, Flavor::cavity);
    });
    return result;
}

} // namespace wqed
