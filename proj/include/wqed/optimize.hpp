#ifndef WQED_OPTIMIZE_HPP
#define WQED_OPTIMIZE_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wqed/model.hpp"
#include "wqed/params.hpp"

namespace wqed {

// Parameters the optimizer may vary.  All optimizer-facing values (bounds,
// locations) are user units (/2pi MHz); the fixed snapshot stays angular.
enum class FreeParameter { h, V, g, Gamma_1 };

std::string_view to_string(FreeParameter p);
FreeParameter parse_free_parameter(std::string_view name);  // throws UnknownParameter

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

Interval default_bounds(FreeParameter p);

struct OptimizationProblem {
    Flavor flavor = Flavor::cavity;
    CavityParams fixed;                         // everything not being varied
    std::vector<FreeParameter> free_parameters; // nonempty
    std::vector<Interval> bounds;               // aligned with free_parameters
    int grid_per_axis = 41;
    int max_iterations = 500;
    double tolerance = 1e-10;  // domain tolerance, user units
    unsigned threads = 0;      // grid phase; 0 = hardware concurrency
};

struct Optimum {
    std::vector<FreeParameter> parameters;
    std::vector<double> location;  // aligned with parameters
    double eta_max = 0.0;
    int iterations = 0;
    bool converged = false;
    bool on_boundary = false;  // maximum sat on a bound: reported, not an error
    std::string stop_reason;
    std::optional<MatchingReport> matching;  // at the optimum (cavity only)

    double value_of(FreeParameter p) const;  // throws UnknownParameter
};

// 1-D maximization of the bare detection efficiency over Gamma_1 by
// golden-section search.  gamma_q and delta are user units here too.
Optimum optimize_bare(double gamma_q, double delta, Interval gamma1_bounds,
                      double tolerance = 1e-10);

// Coarse grid + simplex refinement, with matched-coupling seeds folded in.
Optimum optimize_cavity(const OptimizationProblem& problem);

struct MatchingCandidate {
    double V = 0.0;  // user units
    double g = 0.0;  // user units, g_opt(V)
    double eta = 0.0;
};

// Candidate points (h=0, V, g_opt(V)) on a coarse V grid; empty when the
// matched coupling exists nowhere in range.
std::vector<MatchingCandidate> seed_from_matching(Interval v_range, const CavityParams& fixed,
                                                  int count = 41);

} // namespace wqed

#endif // WQED_OPTIMIZE_HPP
