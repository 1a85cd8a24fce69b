#include <doctest.h>

#include <cmath>

#include "wqed/errors.hpp"
#include "wqed/model.hpp"
#include "wqed/params.hpp"

using namespace wqed;

namespace {

// the rounded working point used throughout: gamma_q/2pi = 0.16,
// gamma_c/2pi = 0.76, h = 0, V/2pi = 0.61, g/2pi = 0.29, on resonance
CavityParams working_point() {
    return CavityParams::from_user(0.0, 0.0, 0.16, 0.76, 0.0, 0.61, 0.29);
}

} // namespace

TEST_CASE("user values ingest as angular frequencies") {
    CHECK(to_angular(0.16) == doctest::Approx(1.0053096491487339).epsilon(1e-15));
    CHECK(to_user(to_angular(0.73)) == doctest::Approx(0.73).epsilon(1e-15));
    const CavityParams p = working_point();
    CHECK(p.gamma_c == doctest::Approx(2.0 * std::numbers::pi * 0.76).epsilon(1e-15));
    CHECK(p.v_g == 1.0);
    CHECK(p.gamma1() == 0.0);
    CHECK(p.gamma2() == doctest::Approx(p.V * p.V / 2.0).epsilon(1e-15));
}

TEST_CASE("derived decay rates follow the couplings") {
    BareParams p = BareParams::from_user(0.0, 0.16, 0.2);
    CHECK(p.gamma1() == doctest::Approx(p.h * p.h).epsilon(1e-15));
    p.set_gamma1(0.7);
    CHECK(p.gamma1() == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(p.h == doctest::Approx(std::sqrt(0.7)).epsilon(1e-15));
}

TEST_CASE("bare amplitudes at the matched resonance") {
    BareParams p = BareParams::from_user(0.0, 0.16, 0.0);
    p.set_gamma1(p.gamma_q);  // Gamma1 = gamma_q maximizes the excitation
    const ScatterSolution s = bare_amplitudes(p);
    CHECK(s.flavor == Flavor::bare);
    CHECK(s.t.real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::fabs(s.t.imag()) < 1e-15);
    CHECK(s.r.real() == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(std::fabs(s.r.imag()) < 1e-15);
    CHECK(std::fabs(s.e_q.real()) < 1e-15);
    CHECK(s.e_q.imag() == doctest::Approx(-0.49867785050179086).epsilon(1e-13));
    CHECK(std::norm(s.e_q) == doctest::Approx(0.24867959858108646).epsilon(1e-13));
    CHECK(s.e_a == cplx{0.0, 0.0});
    CHECK(s.e_b == cplx{0.0, 0.0});
}

TEST_CASE("bare detection report is a normalized budget") {
    BareParams p = BareParams::from_user(0.35, 0.16, 0.27);
    const ScatterSolution s = bare_amplitudes(p);
    const DetectionReport rep = detection_report(s);
    CHECK(rep.p_t + rep.p_r + rep.p_q + rep.p_a + rep.p_b == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.eta == rep.p_q);
    CHECK(rep.conversion == doctest::Approx(1.0 - rep.p_t - rep.p_r).epsilon(1e-14));
    CHECK(rep.weight_sum == doctest::Approx(s.weight_sum()).epsilon(1e-15));
    CHECK(rep.eta >= 0.0);
    CHECK(rep.eta <= 1.0);
    CHECK(bare_dp(p).eta == rep.eta);
}

TEST_CASE("matched resonance maximizes the bare efficiency") {
    BareParams p = BareParams::from_user(0.0, 0.16, 0.0);
    p.set_gamma1(p.gamma_q);
    const double eta = bare_dp(p).eta;
    CHECK(eta == doctest::Approx(0.33215757321608513).epsilon(1e-13));
    CHECK(eta == doctest::Approx(1.0 / (1.0 + 2.0 * p.gamma_q)).epsilon(1e-13));
    // nearby points score lower
    for (double g1 : {0.5 * p.gamma_q, 0.9 * p.gamma_q, 1.1 * p.gamma_q, 2.0 * p.gamma_q}) {
        BareParams q = p;
        q.set_gamma1(g1);
        CHECK(bare_dp(q).eta < eta);
    }
}

TEST_CASE("bare efficiency is symmetric in the detuning") {
    for (double d : {0.05, 0.2, 0.47, 1.3}) {
        BareParams plus = BareParams::from_user(d, 0.16, 0.2);
        BareParams minus = BareParams::from_user(-d, 0.16, 0.2);
        CHECK(bare_dp(plus).eta == doctest::Approx(bare_dp(minus).eta).epsilon(1e-14));
    }
}

TEST_CASE("degenerate bare denominator is rejected") {
    BareParams p;  // gamma_q = h = delta = 0: the denominator vanishes
    CHECK_THROWS_AS(bare_amplitudes(p), DegenerateDenominator);
}

TEST_CASE("cavity amplitudes at the rounded working point") {
    const ScatterSolution s = cavity_amplitudes(working_point());
    CHECK(s.flavor == Flavor::cavity);
    CHECK(s.t.real() == doctest::Approx(0.0017430078467391542).epsilon(1e-11));
    CHECK(std::fabs(s.t.imag()) < 1e-15);
    CHECK(s.r.real() == doctest::Approx(0.21376450182872592).epsilon(1e-12));
    CHECK(std::fabs(s.r.imag()) < 1e-15);
    CHECK(s.e_q.real() == doctest::Approx(-0.37098564261833983).epsilon(1e-12));
    CHECK(std::fabs(s.e_q.imag()) < 1e-15);
    CHECK(std::fabs(s.e_a.real()) < 1e-15);
    CHECK(s.e_a.imag() == doctest::Approx(-0.26045497504465387).epsilon(1e-12));
    CHECK(std::fabs(s.e_b.real()) < 1e-15);
    CHECK(s.e_b.imag() == doctest::Approx(0.0557732411862594).epsilon(1e-12));
}

TEST_CASE("cavity report at the rounded working point") {
    const DetectionReport rep = detection_report(cavity_amplitudes(working_point()));
    CHECK(rep.p_t == doctest::Approx(1.1947943215709858e-05).epsilon(1e-10));
    CHECK(rep.p_r == doctest::Approx(0.179707267005823).epsilon(1e-12));
    CHECK(rep.p_q == doctest::Approx(0.5412634113051674).epsilon(1e-12));
    CHECK(rep.p_a == doctest::Approx(0.2667840003232196).epsilon(1e-12));
    CHECK(rep.p_b == doctest::Approx(0.012233373422574323).epsilon(1e-12));
    CHECK(rep.conversion == doctest::Approx(0.8202807850509612).epsilon(1e-12));
    CHECK(rep.eta == rep.p_q);
    CHECK(rep.p_t + rep.p_r + rep.p_q + rep.p_a + rep.p_b == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("matched coupling formula and its window") {
    CavityParams p = working_point();
    const MatchingReport rep = matching_report(p);
    REQUIRE(rep.g_opt.has_value());
    CHECK(*rep.g_opt == doctest::Approx(1.810661334493301).epsilon(1e-13));
    CHECK(to_user(*rep.g_opt) == doctest::Approx(0.2881757016499766).epsilon(1e-13));
    CHECK(optimal_atom_cavity_coupling(p) == *rep.g_opt);
    CHECK(rep.phase_residual == 0.0);  // h = 0 satisfies phase matching trivially

    // below the loss threshold Gamma2 < gamma_c the formula has no real root
    p.V = to_angular(0.3);
    CHECK_FALSE(matching_report(p).g_opt.has_value());
    CHECK_THROWS_AS(optimal_atom_cavity_coupling(p), GOptUndefined);
}

TEST_CASE("phase residual tracks Gamma2 V g h") {
    CavityParams p = CavityParams::from_user(0.1, -0.2, 0.16, 0.76, 0.12, 0.61, 0.29);
    const MatchingReport rep = matching_report(p);
    CHECK(rep.phase_residual ==
          doctest::Approx(p.gamma2() * p.V * p.g * p.h).epsilon(1e-14));
    CHECK(rep.phase_residual != 0.0);
}

TEST_CASE("magnitude matching zeroes the transmission at h = 0") {
    CavityParams p = working_point();
    p.g = optimal_atom_cavity_coupling(p);
    const MatchingReport rep = matching_report(p);
    CHECK(std::fabs(rep.magnitude_residual) <= 1e-12 * rep.magnitude_scale);
    const ScatterSolution s = cavity_amplitudes(p);
    CHECK(std::abs(s.t) < 1e-12);
    const DetectionReport d = detection_report(s);
    CHECK(d.p_r == doctest::Approx(0.1775386375278458).epsilon(1e-12));
    CHECK(d.eta == doctest::Approx(0.541523353860134).epsilon(1e-12));
    CHECK(d.p_a == doctest::Approx(0.2688522622423821).epsilon(1e-12));
    CHECK(d.p_b == doctest::Approx(0.012085746369638072).epsilon(1e-12));
    CHECK(d.conversion == doctest::Approx(0.8224613624721542).epsilon(1e-12));
}

TEST_CASE("cavity reduces to the bare detector when decoupled") {
    CavityParams p = CavityParams::from_user(0.23, 0.0, 0.16, 0.76, 0.31, 0.0, 0.0);
    const ScatterSolution cav = cavity_amplitudes(p);
    const ScatterSolution bare = bare_amplitudes(p.atom_only());
    CHECK(std::abs(cav.t - bare.t) < 1e-12);
    CHECK(std::abs(cav.r - bare.r) < 1e-12);
    CHECK(std::abs(cav.e_q - bare.e_q) < 1e-12);
    CHECK(std::abs(cav.e_a) < 1e-15);
    CHECK(std::abs(cav.e_b) < 1e-15);
}

TEST_CASE("lossless scattering is unitary") {
    for (double d : {-0.8, -0.1, 0.0, 0.3, 1.1}) {
        BareParams p = BareParams::from_user(d, 0.0, 0.27);
        const ScatterSolution s = bare_amplitudes(p);
        CHECK(std::norm(s.t) + std::norm(s.r) == doctest::Approx(1.0).epsilon(1e-10));

        CavityParams c = CavityParams::from_user(d, 0.4 * d, 0.0, 0.0, 0.14, 0.61, 0.29);
        const ScatterSolution cs = cavity_amplitudes(c);
        CHECK(std::norm(cs.t) + std::norm(cs.r) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("zero-dissipation resonance reflects fully") {
    BareParams p = BareParams::from_user(0.0, 0.0, 0.3);
    const ScatterSolution s = bare_amplitudes(p);
    CHECK(std::abs(s.t) < 1e-14);
    CHECK(std::norm(s.r) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("fully decoupled cavity point transmits") {
    // V = 0 and h = 0: nothing connects the waveguide to anything
    CavityParams p = CavityParams::from_user(0.0, 0.0, 0.16, 0.76, 0.0, 0.0, 0.29);
    const ScatterSolution s = cavity_amplitudes(p);
    CHECK(s.t == cplx{1.0, 0.0});
    CHECK(std::abs(s.r) == 0.0);
    CHECK(detection_report(s).p_t == 1.0);
}
