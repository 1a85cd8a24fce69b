#ifndef WQED_PARAMS_HPP
#define WQED_PARAMS_HPP

#include <cmath>
#include <numbers>

namespace wqed {

// All rates, frequencies and coupling amplitudes are stored as angular
// values (rad MHz). User-facing numbers follow the x/2pi MHz convention;
// to_angular() is the single ingestion point.
inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double to_angular(double user) { return two_pi * user; }
constexpr double to_user(double angular) { return angular / two_pi; }

// Two-level atom coupled to the waveguide at a point. Detunings are
// canonical; absolute frequencies only enter through delta = omega - Omega.
struct BareParams {
    double delta = 0.0;    // photon-atom detuning
    double gamma_q = 0.0;  // atomic dissipation rate
    double h = 0.0;        // atom-waveguide coupling amplitude, >= 0
    double v_g = 1.0;      // group velocity, fixed to 1

    // Effective atom-waveguide decay rate induced by the point coupling.
    double gamma1() const { return h * h / v_g; }

    static BareParams from_user(double delta_u, double gamma_q_u, double h_u) {
        return {to_angular(delta_u), to_angular(gamma_q_u), to_angular(h_u), 1.0};
    }
    static BareParams from_frequencies(double omega, double Omega,
                                       double gamma_q, double h) {
        return {omega - Omega, gamma_q, h, 1.0};
    }
    // Convenience for scans parameterized by Gamma1 instead of h.
    void set_gamma1(double gamma1_angular) {
        h = std::sqrt(gamma1_angular * v_g);
    }
};

// The same atom placed in a two-mode microring that also couples to the
// waveguide. The two whispering-gallery modes share omega_c and gamma_c.
struct CavityParams : BareParams {
    double delta_c = 0.0;  // photon-cavity detuning
    double gamma_c = 0.0;  // cavity dissipation rate
    double V = 0.0;        // waveguide-cavity coupling amplitude, >= 0
    double g = 0.0;        // atom-cavity coupling, >= 0

    // Effective cavity-waveguide decay rate per mode.
    double gamma2() const { return V * V / (2.0 * v_g); }

    static CavityParams from_user(double delta_u, double delta_c_u,
                                  double gamma_q_u, double gamma_c_u,
                                  double h_u, double V_u, double g_u) {
        CavityParams p;
        p.delta = to_angular(delta_u);
        p.gamma_q = to_angular(gamma_q_u);
        p.h = to_angular(h_u);
        p.delta_c = to_angular(delta_c_u);
        p.gamma_c = to_angular(gamma_c_u);
        p.V = to_angular(V_u);
        p.g = to_angular(g_u);
        return p;
    }
    BareParams atom_only() const {
        return {delta, gamma_q, h, v_g};
    }
};

} // namespace wqed

#endif // WQED_PARAMS_HPP
