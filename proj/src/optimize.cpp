#include "wqed/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "wqed/detail/parallel.hpp"
#include "wqed/errors.hpp"

namespace wqed {

namespace {

CavityParams with_values(const OptimizationProblem& pb, const std::vector<double>& x) {
    CavityParams p = pb.fixed;
    for (std::size_t i = 0; i < pb.free_parameters.size(); ++i) {
        const double w = to_angular(x[i]);
        switch (pb.free_parameters[i]) {
            case FreeParameter::h: p.h = w; break;
            case FreeParameter::V: p.V = w; break;
            case FreeParameter::g: p.g = w; break;
            case FreeParameter::Gamma_1: p.set_gamma1(w); break;
        }
    }
    return p;
}

double objective(const OptimizationProblem& pb, const std::vector<double>& x) {
    try {
        const CavityParams p = with_values(pb, x);
        return pb.flavor == Flavor::bare ? bare_dp(p.atom_only()).eta : cavity_dp(p).eta;
    } catch (const DegenerateDenominator&) {
        return -1.0;  // poisoned probe, never optimal
    }
}

int index_of(const OptimizationProblem& pb, FreeParameter p) {
    for (std::size_t i = 0; i < pb.free_parameters.size(); ++i)
        if (pb.free_parameters[i] == p) return static_cast<int>(i);
    return -1;
}

// Tie-break value used when two probes score identically: prefer the smaller
// V, then the smaller g (fixed values fill in for parameters not varied).
double tie_value(const OptimizationProblem& pb, const std::vector<double>& x, FreeParameter p,
                 double fixed_angular) {
    const int i = index_of(pb, p);
    return i >= 0 ? x[static_cast<std::size_t>(i)] : to_user(fixed_angular);
}

bool better(const OptimizationProblem& pb, double f_new, const std::vector<double>& x_new,
            double f_old, const std::vector<double>& x_old) {
    if (f_new != f_old) return f_new > f_old;
    const double vn = tie_value(pb, x_new, FreeParameter::V, pb.fixed.V);
    const double vo = tie_value(pb, x_old, FreeParameter::V, pb.fixed.V);
    if (vn != vo) return vn < vo;
    return tie_value(pb, x_new, FreeParameter::g, pb.fixed.g) <
           tie_value(pb, x_old, FreeParameter::g, pb.fixed.g);
}

void validate(const OptimizationProblem& pb) {
    if (pb.free_parameters.empty()) throw UsageError("optimization needs at least one free parameter");
    if (pb.bounds.size() != pb.free_parameters.size())
        throw UsageError("every free parameter needs exactly one bound interval");
    for (std::size_t i = 0; i < pb.free_parameters.size(); ++i) {
        const Interval& b = pb.bounds[i];
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi)
            throw UsageError("bounds for " + std::string(to_string(pb.free_parameters[i])) +
                             " must be finite with lo <= hi");
        for (std::size_t j = i + 1; j < pb.free_parameters.size(); ++j)
            if (pb.free_parameters[i] == pb.free_parameters[j])
                throw UsageError("free parameter listed twice: " +
                                 std::string(to_string(pb.free_parameters[i])));
        if (pb.flavor == Flavor::bare &&
            (pb.free_parameters[i] == FreeParameter::V || pb.free_parameters[i] == FreeParameter::g))
            throw UsageError("parameter " + std::string(to_string(pb.free_parameters[i])) +
                             " does not apply to a bare-atom optimization");
    }
    if (pb.grid_per_axis < 2) throw UsageError("grid_per_axis must be at least 2");
    if (pb.max_iterations < 1) throw UsageError("max_iterations must be positive");
    if (!(pb.tolerance > 0)) throw UsageError("tolerance must be positive");
}

struct SimplexOutcome {
    std::vector<double> x;
    double f = -1.0;
    int iterations = 0;
    bool converged = false;
};

// Nelder-Mead over the non-pinned coordinates, maximizing eval(x); probes are
// clamped into the bound box before evaluation and stored clamped.
template <typename Eval>
SimplexOutcome refine_simplex(const OptimizationProblem& pb, const std::vector<int>& active,
                              std::vector<double> seed, Eval&& eval) {
    constexpr double kAlpha = 1.0, kGamma = 2.0, kRho = 0.5, kSigma = 0.5;
    const std::size_t k = active.size();
    SimplexOutcome out;
    if (k == 0) {
        out.x = std::move(seed);
        out.f = eval(out.x);
        out.converged = true;
        return out;
    }

    auto clamp_active = [&](std::vector<double>& x) {
        for (int dim : active) {
            const Interval& b = pb.bounds[static_cast<std::size_t>(dim)];
            x[static_cast<std::size_t>(dim)] = std::clamp(x[static_cast<std::size_t>(dim)], b.lo, b.hi);
        }
    };

    struct Vertex {
        std::vector<double> x;
        double f;
    };
    std::vector<Vertex> simplex;
    simplex.reserve(k + 1);
    clamp_active(seed);
    simplex.push_back({seed, eval(seed)});
    for (int dim : active) {
        const Interval& b = pb.bounds[static_cast<std::size_t>(dim)];
        double step = 0.05 * (b.hi - b.lo);
        std::vector<double> v = seed;
        if (v[static_cast<std::size_t>(dim)] + step > b.hi) step = -step;
        v[static_cast<std::size_t>(dim)] += step;
        clamp_active(v);
        simplex.push_back({v, eval(v)});
    }

    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& a, const Vertex& b) { return a.f > b.f; });
    };
    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t i = 1; i < simplex.size(); ++i)
            for (int dim : active)
                d = std::max(d, std::fabs(simplex[i].x[static_cast<std::size_t>(dim)] -
                                          simplex[0].x[static_cast<std::size_t>(dim)]));
        return d;
    };

    order();
    while (out.iterations < pb.max_iterations) {
        if (diameter() < pb.tolerance) {
            out.converged = true;
            break;
        }
        ++out.iterations;

        std::vector<double> centroid(seed.size(), 0.0);
        for (std::size_t i = 0; i + 1 < simplex.size(); ++i)
            for (std::size_t d = 0; d < centroid.size(); ++d) centroid[d] += simplex[i].x[d];
        for (double& c : centroid) c /= static_cast<double>(k);
        // pinned coordinates stay exactly at the seed value
        for (std::size_t d = 0; d < centroid.size(); ++d)
            if (std::find(active.begin(), active.end(), static_cast<int>(d)) == active.end())
                centroid[d] = seed[d];

        const Vertex& worst = simplex.back();
        auto blend = [&](double coeff) {
            std::vector<double> x = centroid;
            for (int dim : active) {
                const std::size_t d = static_cast<std::size_t>(dim);
                x[d] = centroid[d] + coeff * (centroid[d] - worst.x[d]);
            }
            clamp_active(x);
            return x;
        };

        std::vector<double> xr = blend(kAlpha);
        const double fr = eval(xr);
        if (fr > simplex[0].f) {
            std::vector<double> xe = blend(kGamma);
            const double fe = eval(xe);
            if (fe > fr)
                simplex.back() = {std::move(xe), fe};
            else
                simplex.back() = {std::move(xr), fr};
        } else if (fr > simplex[simplex.size() - 2].f) {
            simplex.back() = {std::move(xr), fr};
        } else {
            const bool outside = fr > worst.f;
            std::vector<double> xc = outside ? blend(kRho) : blend(-kRho);
            const double fc = eval(xc);
            if (fc > (outside ? fr : worst.f)) {
                simplex.back() = {std::move(xc), fc};
            } else {
                for (std::size_t i = 1; i < simplex.size(); ++i) {
                    for (int dim : active) {
                        const std::size_t d = static_cast<std::size_t>(dim);
                        simplex[i].x[d] =
                            simplex[0].x[d] + kSigma * (simplex[i].x[d] - simplex[0].x[d]);
                    }
                    clamp_active(simplex[i].x);
                    simplex[i].f = eval(simplex[i].x);
                }
            }
        }
        order();
    }

    out.x = simplex[0].x;
    out.f = simplex[0].f;
    return out;
}

bool near(double x, double bound, double eps) { return std::fabs(x - bound) <= eps; }

} // namespace

std::string_view to_string(FreeParameter p) {
    switch (p) {
        case FreeParameter::h: return "h";
        case FreeParameter::V: return "V";
        case FreeParameter::g: return "g";
        case FreeParameter::Gamma_1: return "Gamma1";
    }
    return "?";
}

FreeParameter parse_free_parameter(std::string_view name) {
    if (name == "h") return FreeParameter::h;
    if (name == "V") return FreeParameter::V;
    if (name == "g") return FreeParameter::g;
    if (name == "Gamma1" || name == "Gamma_1") return FreeParameter::Gamma_1;
    throw UnknownParameter("unknown optimization parameter '" + std::string(name) + "'");
}

Interval default_bounds(FreeParameter p) {
    switch (p) {
        case FreeParameter::h: return {0.0, 0.5};
        case FreeParameter::V: return {0.01, 1.2};
        case FreeParameter::g: return {0.01, 0.6};
        case FreeParameter::Gamma_1: return {1e-4, 2.0};
    }
    return {};
}

double Optimum::value_of(FreeParameter p) const {
    for (std::size_t i = 0; i < parameters.size(); ++i)
        if (parameters[i] == p) return location[i];
    throw UnknownParameter("parameter " + std::string(to_string(p)) +
                           " was not part of this optimization");
}

Optimum optimize_bare(double gamma_q, double delta, Interval gamma1_bounds, double tolerance) {
    if (!(gamma1_bounds.lo > 0) || !std::isfinite(gamma1_bounds.hi) ||
        gamma1_bounds.lo > gamma1_bounds.hi)
        throw UsageError("Gamma1 bounds must satisfy 0 < lo <= hi");
    if (!(tolerance > 0)) throw UsageError("tolerance must be positive");

    auto eta_of = [&](double gamma1_user) {
        BareParams p;
        p.delta = to_angular(delta);
        p.gamma_q = to_angular(gamma_q);
        p.set_gamma1(to_angular(gamma1_user));
        try {
            return bare_dp(p).eta;
        } catch (const DegenerateDenominator&) {
            return -1.0;
        }
    };

    double a = gamma1_bounds.lo, c = gamma1_bounds.hi;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = c - invphi * (c - a);
    double x2 = a + invphi * (c - a);
    double f1 = eta_of(x1), f2 = eta_of(x2);
    int iterations = 0;
    while (c - a > tolerance && iterations < 200) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (c - a);
            f2 = eta_of(x2);
        } else {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - invphi * (c - a);
            f1 = eta_of(x1);
        }
        ++iterations;
    }

    double x_star = 0.5 * (a + c);
    double f_star = eta_of(x_star);
    if (f1 > f_star) { f_star = f1; x_star = x1; }
    if (f2 > f_star) { f_star = f2; x_star = x2; }

    Optimum opt;
    opt.parameters = {FreeParameter::Gamma_1};
    opt.location = {x_star};
    opt.eta_max = f_star;
    opt.iterations = iterations;
    opt.converged = c - a <= tolerance;
    const double eps = 2.0 * tolerance + 1e-12;
    opt.on_boundary = near(x_star, gamma1_bounds.lo, eps) || near(x_star, gamma1_bounds.hi, eps);
    if (gamma1_bounds.hi - gamma1_bounds.lo <= tolerance)
        opt.stop_reason = "pinned bounds";
    else if (opt.converged)
        opt.stop_reason = "golden-section interval below tolerance";
    else
        opt.stop_reason = "iteration cap reached";
    if (opt.on_boundary) opt.stop_reason += "; no interior maximum (optimum on a bound)";
    return opt;
}

std::vector<MatchingCandidate> seed_from_matching(Interval v_range, const CavityParams& fixed,
                                                  int count) {
    if (count < 1 || !std::isfinite(v_range.lo) || !std::isfinite(v_range.hi) ||
        v_range.lo > v_range.hi)
        throw UsageError("invalid V range for matching seeds");
    std::vector<MatchingCandidate> out;
    for (int k = 0; k < count; ++k) {
        const double V_user =
            count == 1 ? v_range.lo
                       : v_range.lo + (v_range.hi - v_range.lo) * static_cast<double>(k) /
                                          static_cast<double>(count - 1);
        CavityParams p = fixed;
        p.h = 0.0;
        p.V = to_angular(V_user);
        const auto rep = matching_report(p);
        if (!rep.g_opt) continue;
        p.g = *rep.g_opt;
        double eta;
        try {
            eta = cavity_dp(p).eta;
        } catch (const DegenerateDenominator&) {
            continue;
        }
        out.push_back({V_user, to_user(*rep.g_opt), eta});
    }
    return out;
}

Optimum optimize_cavity(const OptimizationProblem& pb) {
    validate(pb);
    const std::size_t d = pb.free_parameters.size();

    std::vector<int> counts(d);
    std::vector<int> active;
    for (std::size_t i = 0; i < d; ++i) {
        const bool pinned = pb.bounds[i].hi == pb.bounds[i].lo;
        counts[i] = pinned ? 1 : pb.grid_per_axis;
        if (!pinned) active.push_back(static_cast<int>(i));
    }
    std::size_t total = 1;
    for (int c : counts) total *= static_cast<std::size_t>(c);

    auto coords_at = [&](std::size_t idx) {
        std::vector<double> x(d);
        for (std::size_t i = d; i-- > 0;) {
            const int n = counts[i];
            const int k = static_cast<int>(idx % static_cast<std::size_t>(n));
            idx /= static_cast<std::size_t>(n);
            const Interval& b = pb.bounds[i];
            x[i] = n == 1 ? b.lo
                          : b.lo + (b.hi - b.lo) * static_cast<double>(k) /
                                       static_cast<double>(n - 1);
        }
        return x;
    };

    // Phase 1: coarse grid, parallel over index-keyed slots.
    std::vector<double> grid_eta(total);
    detail::parallel_for(total, pb.threads,
                         [&](std::size_t idx) { grid_eta[idx] = objective(pb, coords_at(idx)); });

    std::size_t best_idx = 0;
    {
        std::vector<double> best_x = coords_at(0);
        for (std::size_t idx = 1; idx < total; ++idx) {
            std::vector<double> x = coords_at(idx);
            if (better(pb, grid_eta[idx], x, grid_eta[best_idx], best_x)) {
                best_idx = idx;
                best_x = std::move(x);
            }
        }
    }

    double best_f = grid_eta[best_idx];
    std::vector<double> best_loc = coords_at(best_idx);
    int probes = static_cast<int>(total);

    // Every later evaluation funnels through here so the reported optimum can
    // never fall below a probe the run has seen.
    auto record = [&](const std::vector<double>& x) {
        const double f = objective(pb, x);
        ++probes;
        if (better(pb, f, x, best_f, best_loc)) {
            best_f = f;
            best_loc = x;
        }
        return f;
    };

    int iterations = 0;
    bool converged = true;
    auto refine_from = [&](const std::vector<double>& seed) {
        const SimplexOutcome sx = refine_simplex(pb, active, seed, record);
        iterations += sx.iterations;
        converged = converged && sx.converged;
    };

    refine_from(coords_at(best_idx));

    // Phase 2: the matched-coupling seed family (h = 0, g = g_opt(V)), when
    // the problem leaves both V and g free and allows h = 0.
    const int iV = index_of(pb, FreeParameter::V);
    const int ig = index_of(pb, FreeParameter::g);
    const int ih = index_of(pb, FreeParameter::h);
    const bool h_zero_allowed =
        ih >= 0 ? (pb.bounds[static_cast<std::size_t>(ih)].lo <= 0.0 &&
                   pb.bounds[static_cast<std::size_t>(ih)].hi >= 0.0)
                : pb.fixed.h == 0.0;
    if (pb.flavor == Flavor::cavity && iV >= 0 && ig >= 0 && h_zero_allowed) {
        const Interval& vb = pb.bounds[static_cast<std::size_t>(iV)];
        const Interval& gb = pb.bounds[static_cast<std::size_t>(ig)];
        const auto seeds = seed_from_matching(vb, pb.fixed, pb.grid_per_axis);
        bool have = false;
        double seed_f = 0.0;
        std::vector<double> seed_x;
        for (const MatchingCandidate& c : seeds) {
            std::vector<double> x = best_loc;
            x[static_cast<std::size_t>(iV)] = c.V;
            x[static_cast<std::size_t>(ig)] = std::clamp(c.g, gb.lo, gb.hi);
            if (ih >= 0) x[static_cast<std::size_t>(ih)] = 0.0;
            const double f = record(x);
            if (!have || better(pb, f, x, seed_f, seed_x)) {
                have = true;
                seed_f = f;
                seed_x = std::move(x);
            }
        }
        if (have) refine_from(seed_x);
    }

    Optimum opt;
    opt.parameters = pb.free_parameters;
    opt.location = best_loc;
    opt.eta_max = best_f;
    opt.iterations = iterations;
    opt.converged = converged;
    const double eps = 2.0 * pb.tolerance + 1e-12;
    for (int dim : active) {
        const std::size_t i = static_cast<std::size_t>(dim);
        if (near(best_loc[i], pb.bounds[i].lo, eps) || near(best_loc[i], pb.bounds[i].hi, eps))
            opt.on_boundary = true;
    }
    if (active.empty()) {
        opt.stop_reason = "pinned bounds";
        opt.on_boundary = true;
    } else if (converged) {
        opt.stop_reason = "grid scan and simplex refinement converged (" +
                          std::to_string(probes) + " probes)";
    } else {
        opt.stop_reason = "iteration cap reached";
    }
    if (opt.on_boundary) opt.stop_reason += "; no interior maximum (optimum on a bound)";
    if (pb.flavor == Flavor::cavity) opt.matching = matching_report(with_values(pb, best_loc));
    return opt;
}

} // namespace wqed
