#include "wqed/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

const cplx kI{0.0, 1.0};
constexpr double kPivotRelTol = 1e-14;

} // namespace

ComplexMatrixSystem build_bare_system(const BareParams& p) {
    // -i vg (t - 1) + h e_q = 0
    // +i vg (-r) + h e_q = 0
    // (Omega - i gamma_q) e_q + h (1+t)/2 + h r/2 = omega e_q,
    // i.e. h t/2 + h r/2 - (delta + i gamma_q) e_q = -h/2.
    const cplx B = p.delta + kI * p.gamma_q;
    ComplexMatrixSystem s;
    s.n = 3;
    s.unknown_labels = {"t", "r", "e_q"};
    s.A = {
        -kI * p.v_g, 0.0,         p.h,
        0.0,         -kI * p.v_g, p.h,
        p.h / 2.0,   p.h / 2.0,   -B,
    };
    s.b = {-kI * p.v_g, 0.0, -p.h / 2.0};
    return s;
}

ComplexMatrixSystem build_cavity_system(const CavityParams& p) {
    const cplx A = p.delta_c + kI * p.gamma_c;
    const cplx B = p.delta + kI * p.gamma_q;
    ComplexMatrixSystem s;
    s.n = 5;
    s.unknown_labels = {"t", "r", "e_q", "e_a", "e_b"};
    s.A = {
        -kI * p.v_g, 0.0,         p.h, p.V, 0.0,
        0.0,         -kI * p.v_g, p.h, 0.0, p.V,
        p.V / 2.0,   0.0,         p.g, -A,  0.0,
        0.0,         p.V / 2.0,   p.g, 0.0, -A,
        p.h / 2.0,   p.h / 2.0,   -B,  p.g, p.g,
    };
    s.b = {-kI * p.v_g, 0.0, -p.V / 2.0, 0.0, -p.h / 2.0};
    return s;
}

std::vector<cplx> solve_dense(const ComplexMatrixSystem& sys, SolveDiagnostics* diag) {
    const int n = sys.n;
    std::vector<cplx> M = sys.A;
    std::vector<cplx> rhs = sys.b;
    auto at = [&](int i, int j) -> cplx& { return M[static_cast<std::size_t>(i) * n + j]; };

    double pivot_min = 0.0;
    double pivot_max = 0.0;

    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::abs(at(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double mag = std::abs(at(i, k));
            if (mag > best) {
                best = mag;
                pivot = i;
            }
        }
        double row_scale = 0.0;
        for (int j = 0; j < n; ++j) {
            row_scale = std::max(row_scale, std::abs(at(pivot, j)));
        }
        if (best <= kPivotRelTol * row_scale || row_scale == 0.0) {
            throw SingularSystem("pivot magnitude " + std::to_string(best) +
                                 " below tolerance in column " + std::to_string(k));
        }
        if (pivot != k) {
            for (int j = 0; j < n; ++j) std::swap(at(k, j), at(pivot, j));
            std::swap(rhs[k], rhs[pivot]);
        }
        pivot_min = (k == 0) ? best : std::min(pivot_min, best);
        pivot_max = std::max(pivot_max, best);

        for (int i = k + 1; i < n; ++i) {
            const cplx factor = at(i, k) / at(k, k);
            for (int j = k; j < n; ++j) at(i, j) -= factor * at(k, j);
            rhs[i] -= factor * rhs[k];
        }
    }

    std::vector<cplx> x(n);
    for (int i = n - 1; i >= 0; --i) {
        cplx acc = rhs[i];
        for (int j = i + 1; j < n; ++j) acc -= at(i, j) * x[j];
        x[i] = acc / at(i, i);
    }

    if (diag) {
        double residual = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx ax{};
            for (int j = 0; j < n; ++j) ax += sys.at(i, j) * x[j];
            residual = std::max(residual, std::abs(ax - sys.b[i]));
        }
        diag->residual_norm = residual;
        diag->pivot_min = pivot_min;
        diag->condition_estimate = pivot_min > 0.0 ? pivot_max / pivot_min : 0.0;
    }
    return x;
}

std::pair<ScatterSolution, SolveDiagnostics> solve(const ComplexMatrixSystem& sys) {
    SolveDiagnostics diag;
    const auto x = solve_dense(sys, &diag);

    ScatterSolution s;
    s.flavor = sys.n == 5 ? Flavor::cavity : Flavor::bare;
    for (std::size_t i = 0; i < sys.unknown_labels.size(); ++i) {
        const auto& label = sys.unknown_labels[i];
        if (label == "t") s.t = x[i];
        else if (label == "r") s.r = x[i];
        else if (label == "e_q") s.e_q = x[i];
        else if (label == "e_a") s.e_a = x[i];
        else if (label == "e_b") s.e_b = x[i];
    }
    return {s, diag};
}

namespace {

double vector_deviation(const ScatterSolution& closed, const std::vector<cplx>& oracle) {
    const cplx closed_v[5] = {closed.t, closed.r, closed.e_q, closed.e_a, closed.e_b};
    double scale = 0.0;
    for (const auto& v : oracle) scale = std::max(scale, std::abs(v));
    double dev = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        dev = std::max(dev, std::abs(closed_v[i] - oracle[i]));
    }
    return scale > 0.0 ? dev / scale : dev;
}

} // namespace

VerifyResult verify_closed_forms(int draws) {
    // Deterministic: fixed seed, fixed draw order.
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> rate_u(0.02, 2.0);      // /2pi MHz
    std::uniform_real_distribution<double> coupling_u(0.05, 2.0);  // /2pi MHz
    std::uniform_real_distribution<double> detuning_u(-3.0, 3.0);  // /2pi MHz

    VerifyResult result;
    result.draws = draws;
    for (int k = 0; k < draws; ++k) {
        SolveDiagnostics diag;
        double dev = 0.0;
        if (k % 2 == 0) {
            const auto p = BareParams::from_user(detuning_u(rng), rate_u(rng),
                                                 coupling_u(rng));
            const auto oracle = solve_dense(build_bare_system(p), &diag);
            dev = vector_deviation(bare_amplitudes(p), oracle);
        } else {
            const auto p = CavityParams::from_user(detuning_u(rng), detuning_u(rng),
                                                   rate_u(rng), rate_u(rng),
                                                   coupling_u(rng), coupling_u(rng),
                                                   coupling_u(rng));
            const auto oracle = solve_dense(build_cavity_system(p), &diag);
            dev = vector_deviation(cavity_amplitudes(p), oracle);
        }
        result.max_rel_deviation = std::max(result.max_rel_deviation, dev);
        result.max_residual_norm = std::max(result.max_residual_norm, diag.residual_norm);
    }
    return result;
}

} // namespace wqed
