#ifndef WQED_SWEEP_HPP
#define WQED_SWEEP_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wqed/model.hpp"
#include "wqed/params.hpp"

namespace wqed {

enum class SweepParameter { gamma_q, h, V, g, delta, Gamma_1, delta_c };

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view name);  // throws UnknownParameter
bool applicable_to_bare(SweepParameter p);

// A linear grid axis; start/stop are user units (/2pi MHz).
struct AxisSpec {
    SweepParameter parameter = SweepParameter::delta;
    double start = 0.0;
    double stop = 0.0;
    int count = 0;  // >= 2
};

// Grid node i in user units.
double axis_value(const AxisSpec& axis, int i);

// Overrides one parameter of a parameter snapshot (user-unit value).
void apply_parameter(CavityParams& p, SweepParameter which, double user_value);

struct SweepCell {
    DetectionReport report{};
    ScatterSolution solution{};
    bool ok = false;
    std::string status;  // "ok" or the degeneracy message
};

struct Provenance {
    std::string version;
    std::string timestamp;
};

Provenance current_provenance();

struct SweepResult {
    Flavor flavor = Flavor::bare;
    std::vector<AxisSpec> axes;  // 1 or 2
    CavityParams base;           // snapshot; cavity fields zero for bare runs
    std::vector<SweepCell> cells;  // row-major, axes[0] outer
    Provenance provenance;

    std::size_t index(int i0, int i1 = 0) const {
        const std::size_t inner = axes.size() == 2 ? axes[1].count : 1;
        return static_cast<std::size_t>(i0) * inner + static_cast<std::size_t>(i1);
    }
};

struct SweepOptions {
    unsigned threads = 0;  // 0 = hardware concurrency
};

SweepResult sweep(const BareParams& base, std::span<const AxisSpec> axes,
                  SweepOptions options = {});
SweepResult sweep(const CavityParams& base, std::span<const AxisSpec> axes,
                  SweepOptions options = {});

// 1-D scan over V with h = 0, pairing each V with the matched coupling
// g_opt(V) where it exists and keeping the base g elsewhere.
SweepResult line_scan_fig6(const CavityParams& base, const AxisSpec& v_axis,
                           SweepOptions options = {});

} // namespace wqed

#endif // WQED_SWEEP_HPP
