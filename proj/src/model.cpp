#include "wqed/model.hpp"

#include <cmath>
#include <string>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

const cplx kI{0.0, 1.0};

void check_denominator(const cplx& value, double term_scale, const char* name) {
    if (std::abs(value) < kDegeneracyRelTol * term_scale || term_scale == 0.0) {
        throw DegenerateDenominator(std::string("denominator '") + name +
                                    "' vanished (magnitude " +
                                    std::to_string(std::abs(value)) +
                                    " below tolerance)");
    }
}

} // namespace

double ScatterSolution::weight_sum() const {
    return std::norm(t) + std::norm(r) + std::norm(e_q) + std::norm(e_a) +
           std::norm(e_b);
}

ScatterSolution bare_amplitudes(const BareParams& p) {
    const double gamma1 = p.gamma1();
    const cplx den = (kI * p.gamma_q + p.delta) + kI * gamma1;
    check_denominator(den, std::abs(p.delta) + p.gamma_q + gamma1, "delta + i(gamma_q + Gamma1)");

    ScatterSolution s;
    s.flavor = Flavor::bare;
    s.t = (kI * p.gamma_q + p.delta) / den;
    s.r = -kI * gamma1 / den;
    s.e_q = p.h / den;
    return s;
}

ScatterSolution cavity_amplitudes(const CavityParams& p) {
    const double gamma1 = p.gamma1();
    const double gamma2 = p.gamma2();
    const cplx A = p.delta_c + kI * p.gamma_c;  // cavity response factor
    const cplx B = p.delta + kI * p.gamma_q;    // atom response factor
    const cplx Lambda = A * p.h + p.g * p.V;
    const cplx Upsilon = 2.0 * p.g * p.g - A * B;
    const cplx Theta = A * gamma1 + B * gamma2;

    const cplx bracket = 2.0 * kI * Upsilon + 2.0 * Theta + 4.0 * p.h * p.g * p.V / p.v_g;
    const double bracket_scale = 2.0 * std::abs(Upsilon) + 2.0 * std::abs(Theta) +
                                 4.0 * std::abs(p.h * p.g * p.V) / p.v_g;
    check_denominator(bracket, bracket_scale, "2i*Upsilon + 2*Theta + 4hgV");

    const cplx ring = A + kI * gamma2;
    check_denominator(ring, std::abs(A) + gamma2, "A + i*Gamma2");

    ScatterSolution s;
    s.flavor = Flavor::cavity;
    s.e_q = -2.0 * kI * Lambda / bracket;
    s.e_b = -(2.0 * kI * p.g + p.h * p.V / p.v_g) * Lambda / (ring * bracket);
    s.e_a = (p.V * bracket - (2.0 * kI * p.g + p.V * p.h / p.v_g) * Lambda) / (ring * bracket);
    s.r = -2.0 * Lambda * Lambda / (ring * bracket);
    s.t = ((A - kI * gamma2) * bracket - 2.0 * Lambda * Lambda) / (ring * bracket);
    return s;
}

DetectionReport detection_report(const ScatterSolution& s) {
    DetectionReport rep;
    rep.weight_sum = s.weight_sum();
    rep.p_t = std::norm(s.t) / rep.weight_sum;
    rep.p_r = std::norm(s.r) / rep.weight_sum;
    rep.p_q = std::norm(s.e_q) / rep.weight_sum;
    rep.p_a = std::norm(s.e_a) / rep.weight_sum;
    rep.p_b = std::norm(s.e_b) / rep.weight_sum;
    rep.eta = rep.p_q;
    rep.conversion = 1.0 - rep.p_t - rep.p_r;
    return rep;
}

DetectionReport bare_dp(const BareParams& p) {
    return detection_report(bare_amplitudes(p));
}

DetectionReport cavity_dp(const CavityParams& p) {
    return detection_report(cavity_amplitudes(p));
}

MatchingReport matching_report(const CavityParams& p) {
    const double gamma1 = p.gamma1();
    const double gamma2 = p.gamma2();

    MatchingReport m;
    m.phase_residual = gamma2 * p.V * p.g * p.h;

    const double inner = 2.0 * p.g * p.g + p.gamma_q * (p.gamma_c + gamma2) +
                         p.gamma_c * gamma1;
    m.magnitude_residual = (p.gamma_c - gamma2) * inner + p.g * p.g * p.V * p.V -
                           p.h * p.h * p.gamma_c * p.gamma_c;
    m.magnitude_scale = std::abs(p.gamma_c - gamma2) * inner +
                        p.g * p.g * p.V * p.V + p.h * p.h * p.gamma_c * p.gamma_c;

    if (gamma2 >= p.gamma_c && p.gamma_c > 0.0) {
        m.g_opt = std::sqrt((gamma2 * gamma2 - p.gamma_c * p.gamma_c) * p.gamma_q /
                            (2.0 * p.gamma_c));
    }
    return m;
}

double optimal_atom_cavity_coupling(const CavityParams& p) {
    const auto m = matching_report(p);
    if (!m.g_opt) {
        throw GOptUndefined("g_opt undefined: Gamma2 = " + std::to_string(p.gamma2()) +
                            " < gamma_c = " + std::to_string(p.gamma_c));
    }
    return *m.g_opt;
}

} // namespace wqed
