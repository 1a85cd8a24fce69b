#ifndef WQED_MODEL_HPP
#define WQED_MODEL_HPP

#include <complex>
#include <optional>

#include "wqed/params.hpp"

namespace wqed {

using cplx = std::complex<double>;

enum class Flavor { bare, cavity };

// A denominator counts as zero when its magnitude drops below this
// fraction of the summed magnitudes of its terms.
inline constexpr double kDegeneracyRelTol = 1e-14;

// Stationary scattering amplitudes for a unit-amplitude photon incident
// from the left. e_a and e_b stay zero in the bare case.
struct ScatterSolution {
    Flavor flavor = Flavor::bare;
    cplx t{};    // transmission
    cplx r{};    // reflection
    cplx e_q{};  // atomic excitation
    cplx e_a{};  // forward ring mode
    cplx e_b{};  // backward ring mode

    double weight_sum() const;  // |t|^2+|r|^2+|e_q|^2+|e_a|^2+|e_b|^2
};

// Outcome fractions normalized by the weight sum, so they add to one and
// eta == p_q. conversion = 1 - p_t - p_r is the fraction leaving the
// waveguide channel. weight_sum lets callers recover raw magnitudes.
struct DetectionReport {
    double eta = 0.0;
    double p_t = 0.0;
    double p_r = 0.0;
    double p_q = 0.0;
    double p_a = 0.0;
    double p_b = 0.0;
    double conversion = 0.0;
    double weight_sum = 0.0;
};

// Residuals of the phase- and magnitude-matching conditions, plus the
// matched atom-cavity coupling where it exists (Gamma2 >= gamma_c).
struct MatchingReport {
    double phase_residual = 0.0;
    double magnitude_residual = 0.0;
    std::optional<double> g_opt;  // angular

    // Summed magnitudes of the magnitude-residual terms, for
    // scale-relative "is it zero" checks.
    double magnitude_scale = 0.0;
};

ScatterSolution bare_amplitudes(const BareParams& p);
ScatterSolution cavity_amplitudes(const CavityParams& p);

DetectionReport detection_report(const ScatterSolution& s);
DetectionReport bare_dp(const BareParams& p);
DetectionReport cavity_dp(const CavityParams& p);

MatchingReport matching_report(const CavityParams& p);

// Matched coupling sqrt((Gamma2^2 - gamma_c^2) gamma_q / (2 gamma_c)).
// Throws GOptUndefined when Gamma2 < gamma_c.
double optimal_atom_cavity_coupling(const CavityParams& p);

} // namespace wqed

#endif // WQED_MODEL_HPP
