// Command-line front end: point evaluations, figure-style parameter sweeps,
// coupling optimization, and the closed-form-vs-oracle verification run.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wqed/errors.hpp"
#include "wqed/io.hpp"
#include "wqed/model.hpp"
#include "wqed/optimize.hpp"
#include "wqed/oracle.hpp"
#include "wqed/params.hpp"
#include "wqed/sweep.hpp"
#include "wqed/version.hpp"

namespace {

using namespace wqed;

// All user-facing values are /2pi MHz.
struct ParamFlags {
    double gamma_q = 0.16;
    double gamma_c = 0.76;
    double h = 0.0;
    double V = 0.61;
    double g = 0.29;
    double delta = 0.0;
    double delta_c = 0.0;
    double Gamma1 = 0.0;
};

void add_param_flags(CLI::App* cmd, ParamFlags& f, bool cavity) {
    cmd->add_option("--gamma-q", f.gamma_q, "atomic dissipation rate gamma_q (/2pi MHz)")
        ->capture_default_str();
    cmd->add_option("--delta", f.delta, "photon-atom detuning (/2pi MHz)")->capture_default_str();
    auto* h = cmd->add_option("--h", f.h, "atom-waveguide coupling amplitude (/2pi MHz)")
                  ->capture_default_str();
    auto* g1 = cmd->add_option("--Gamma1", f.Gamma1,
                               "atom-waveguide decay rate Gamma1 = h^2/v_g (/2pi MHz); "
                               "alternative to --h");
    h->excludes(g1);
    g1->excludes(h);
    if (cavity) {
        cmd->add_option("--gamma-c", f.gamma_c, "cavity dissipation rate gamma_c (/2pi MHz)")
            ->capture_default_str();
        cmd->add_option("--V", f.V, "waveguide-cavity coupling amplitude (/2pi MHz)")
            ->capture_default_str();
        cmd->add_option("--g", f.g, "atom-cavity coupling (/2pi MHz)")->capture_default_str();
        cmd->add_option("--delta-c", f.delta_c, "photon-cavity detuning (/2pi MHz)")
            ->capture_default_str();
    }
}

CavityParams build_cavity(const CLI::App* cmd, const ParamFlags& f) {
    CavityParams p =
        CavityParams::from_user(f.delta, f.delta_c, f.gamma_q, f.gamma_c, f.h, f.V, f.g);
    if (cmd->count("--Gamma1")) p.set_gamma1(to_angular(f.Gamma1));
    return p;
}

BareParams build_bare(const CLI::App* cmd, const ParamFlags& f) {
    BareParams p = BareParams::from_user(f.delta, f.gamma_q, f.h);
    if (cmd->count("--Gamma1"))
        p.set_gamma1(to_angular(f.Gamma1));
    else if (!cmd->count("--h"))
        p.set_gamma1(p.gamma_q);  // matched default: Gamma1 = gamma_q
    return p;
}

void apply_overrides(const CLI::App* cmd, const ParamFlags& f, CavityParams& base) {
    if (cmd->count("--gamma-q")) base.gamma_q = to_angular(f.gamma_q);
    if (cmd->count("--gamma-c")) base.gamma_c = to_angular(f.gamma_c);
    if (cmd->count("--h")) base.h = to_angular(f.h);
    if (cmd->count("--V")) base.V = to_angular(f.V);
    if (cmd->count("--g")) base.g = to_angular(f.g);
    if (cmd->count("--delta")) base.delta = to_angular(f.delta);
    if (cmd->count("--delta-c")) base.delta_c = to_angular(f.delta_c);
    if (cmd->count("--Gamma1")) base.set_gamma1(to_angular(f.Gamma1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t from = 0;
    while (true) {
        const std::size_t at = s.find(sep, from);
        if (at == std::string::npos) {
            out.push_back(s.substr(from));
            return out;
        }
        out.push_back(s.substr(from, at - from));
        from = at + 1;
    }
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError(what + ": expected a finite number, got '" + text + "'");
    }
}

int parse_int(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError(what + ": expected an integer, got '" + text + "'");
    }
}

AxisSpec parse_axis_arg(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 4)
        throw UsageError("--axis expects <param>:<start>:<stop>:<count>, got '" + text + "'");
    AxisSpec a;
    a.parameter = parse_sweep_parameter(parts[0]);
    a.start = parse_double(parts[1], "--axis start");
    a.stop = parse_double(parts[2], "--axis stop");
    a.count = parse_int(parts[3], "--axis count");
    return a;
}

std::pair<FreeParameter, Interval> parse_bounds_arg(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3)
        throw UsageError("--bounds expects <param>:<lo>:<hi>, got '" + text + "'");
    return {parse_free_parameter(parts[0]),
            Interval{parse_double(parts[1], "--bounds lo"), parse_double(parts[2], "--bounds hi")}};
}

struct SweepSummary {
    std::size_t degenerate = 0;
    double eta_max = -1.0;
    std::size_t at = 0;
};

SweepSummary summarize(const SweepResult& r) {
    SweepSummary s;
    for (std::size_t i = 0; i < r.cells.size(); ++i) {
        if (!r.cells[i].ok) {
            ++s.degenerate;
            continue;
        }
        if (r.cells[i].report.eta > s.eta_max) {
            s.eta_max = r.cells[i].report.eta;
            s.at = i;
        }
    }
    return s;
}

void print_sweep_summary(const SweepResult& r, const std::filesystem::path& out) {
    const SweepSummary s = summarize(r);
    std::cout << "wrote " << out.string() << " (+ manifest sidecar): " << r.cells.size()
              << " cells, " << s.degenerate << " degenerate";
    if (s.eta_max >= 0.0) {
        const std::size_t inner = r.axes.size() == 2 ? static_cast<std::size_t>(r.axes[1].count) : 1;
        std::cout << ", max eta = " << s.eta_max << " at "
                  << to_string(r.axes[0].parameter) << " = "
                  << axis_value(r.axes[0], static_cast<int>(s.at / inner));
        if (r.axes.size() == 2)
            std::cout << ", " << to_string(r.axes[1].parameter) << " = "
                      << axis_value(r.axes[1], static_cast<int>(s.at % inner));
    }
    std::cout << "\n";
}

void write_sweep_artifacts(const SweepResult& result, RunManifest manifest,
                           const std::filesystem::path& out, OutputFormat format,
                           double wall_ms) {
    manifest.timestamp = result.provenance.timestamp;
    manifest.wall_time_ms = wall_ms;
    manifest.axes = result.axes;
    if (format == OutputFormat::csv)
        write_text_file(out, sweep_csv(result));
    else
        write_text_file(out, sweep_json(result, manifest).dump(2) + "\n");
    write_manifest_sidecar(out, manifest, format);
    print_sweep_summary(result, out);
}

void write_point_artifacts(const ScatterSolution& sol, const DetectionReport& rep,
                           const std::optional<MatchingReport>& matching, RunManifest manifest,
                           const std::string& out, OutputFormat format, double wall_ms) {
    const Json j = point_json(sol, rep, matching, manifest);
    std::cout << j.dump(2) << "\n";
    if (out.empty()) return;
    manifest.timestamp = current_provenance().timestamp;
    manifest.wall_time_ms = wall_ms;
    if (format == OutputFormat::csv)
        write_text_file(out, point_csv(sol, rep));
    else
        write_text_file(out, j.dump(2) + "\n");
    write_manifest_sidecar(out, manifest, format);
}

struct FigDefaults {
    Flavor flavor;
    std::string scan;
    std::vector<AxisSpec> axes;
};

FigDefaults fig_defaults(int n) {
    switch (n) {
        case 2:
            return {Flavor::bare,
                    "grid",
                    {{SweepParameter::gamma_q, 0.01, 0.5, 201}, {SweepParameter::h, 0.0, 0.5, 201}}};
        case 3:
            return {Flavor::bare,
                    "grid",
                    {{SweepParameter::delta, -1.0, 1.0, 201}, {SweepParameter::Gamma_1, 0.0, 0.8, 201}}};
        case 4:
            return {Flavor::cavity,
                    "grid",
                    {{SweepParameter::h, 0.0, 0.5, 201}, {SweepParameter::V, 0.0, 1.2, 201}}};
        case 5:
            return {Flavor::cavity,
                    "grid",
                    {{SweepParameter::V, 0.0, 1.2, 201}, {SweepParameter::g, 0.0, 0.6, 201}}};
        case 6:
            return {Flavor::cavity, "matched_g_line", {{SweepParameter::V, 0.0, 1.2, 2001}}};
        default:
            throw UsageError("figure number must be 2..6");
    }
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-photon detector model: waveguide-coupled atom, bare or in a microring"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    // long-only help: -h would shadow the --h coupling flag on subcommands
    app.set_help_flag("--help", "print this help message and exit");

    // bare / cavity: one point evaluation
    ParamFlags bare_flags;
    auto* bare_cmd = app.add_subcommand("bare", "evaluate the bare-atom amplitudes at one point");
    add_param_flags(bare_cmd, bare_flags, false);
    std::string bare_out;
    std::string bare_format = "json";
    bare_cmd->add_option("--out", bare_out, "write the result here as well");
    bare_cmd->add_option("--format", bare_format, "csv or json")->capture_default_str();

    ParamFlags cavity_flags;
    auto* cavity_cmd =
        app.add_subcommand("cavity", "evaluate the cavity-embedded amplitudes at one point");
    add_param_flags(cavity_cmd, cavity_flags, true);
    std::string cavity_out;
    std::string cavity_format = "json";
    cavity_cmd->add_option("--out", cavity_out, "write the result here as well");
    cavity_cmd->add_option("--format", cavity_format, "csv or json")->capture_default_str();

    // sweep
    ParamFlags sweep_flags;
    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate a 1-D or 2-D parameter grid");
    add_param_flags(sweep_cmd, sweep_flags, true);
    std::string sweep_flavor = "cavity";
    std::vector<std::string> sweep_axes;
    std::string sweep_out;
    std::string sweep_format = "csv";
    std::string sweep_config;
    unsigned sweep_threads = 0;
    sweep_cmd->add_option("--flavor", sweep_flavor, "bare or cavity")
        ->check(CLI::IsMember({"bare", "cavity"}))
        ->capture_default_str();
    sweep_cmd->add_option("--axis", sweep_axes, "<param>:<start>:<stop>:<count> (repeat for 2-D)");
    sweep_cmd->add_option("--out", sweep_out, "output data file (default sweep.<format>)");
    sweep_cmd->add_option("--format", sweep_format, "csv or json")->capture_default_str();
    sweep_cmd->add_option("--config", sweep_config,
                          "re-ingest a previous JSON data file; flags override its values");
    sweep_cmd->add_option("--threads", sweep_threads, "worker threads (0 = all cores)");

    // fig
    int fig_n = 0;
    ParamFlags fig_flags;
    auto* fig_cmd = app.add_subcommand("fig", "regenerate one of the standard scans (2-6)");
    fig_cmd->add_option("n", fig_n, "figure number")->required()->check(CLI::Range(2, 6));
    add_param_flags(fig_cmd, fig_flags, true);
    std::vector<std::string> fig_axes;
    std::string fig_out;
    std::string fig_format = "csv";
    unsigned fig_threads = 0;
    fig_cmd->add_option("--axis", fig_axes, "override the default axes");
    fig_cmd->add_option("--out", fig_out, "output data file (default fig<n>.<format>)");
    fig_cmd->add_option("--format", fig_format, "csv or json")->capture_default_str();
    fig_cmd->add_option("--threads", fig_threads, "worker threads (0 = all cores)");

    // optimize
    std::string opt_flavor = "cavity";
    ParamFlags opt_flags;
    auto* opt_cmd = app.add_subcommand("optimize", "maximize the detection probability");
    opt_cmd->add_option("flavor", opt_flavor, "bare or cavity")
        ->check(CLI::IsMember({"bare", "cavity"}))
        ->capture_default_str();
    add_param_flags(opt_cmd, opt_flags, true);
    std::vector<std::string> opt_free;
    std::vector<std::string> opt_bounds;
    int opt_grid = 41;
    int opt_iters = 500;
    double opt_tol = 1e-10;
    unsigned opt_threads = 0;
    std::string opt_out;
    opt_cmd->add_option("--free", opt_free,
                        "parameters to vary: h, V, g, Gamma1 (default: V g for cavity, "
                        "Gamma1 for bare)");
    opt_cmd->add_option("--bounds", opt_bounds, "<param>:<lo>:<hi> (repeatable, /2pi MHz)");
    opt_cmd->add_option("--grid", opt_grid, "coarse grid nodes per axis")->capture_default_str();
    opt_cmd->add_option("--iters", opt_iters, "simplex iteration cap")->capture_default_str();
    opt_cmd->add_option("--tol", opt_tol, "domain tolerance (/2pi MHz)")->capture_default_str();
    opt_cmd->add_option("--threads", opt_threads, "worker threads for the grid phase");
    opt_cmd->add_option("--out", opt_out, "also write the result JSON here");

    // verify
    int verify_draws = 1000;
    std::string verify_out;
    auto* verify_cmd =
        app.add_subcommand("verify", "compare closed forms against the linear-system oracle");
    verify_cmd->add_option("--draws", verify_draws, "number of random parameter draws")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    verify_cmd->add_option("--out", verify_out, "also write the result JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (*bare_cmd) {
            const BareParams p = build_bare(bare_cmd, bare_flags);
            const ScatterSolution sol = bare_amplitudes(p);
            RunManifest m;
            m.subcommand = "bare";
            m.scan = "point";
            m.flavor = Flavor::bare;
            static_cast<BareParams&>(m.base) = p;
            write_point_artifacts(sol, detection_report(sol), std::nullopt, m, bare_out,
                                  parse_format(bare_format), elapsed_ms(t0));
            return 0;
        }

        if (*cavity_cmd) {
            const CavityParams p = build_cavity(cavity_cmd, cavity_flags);
            const ScatterSolution sol = cavity_amplitudes(p);
            RunManifest m;
            m.subcommand = "cavity";
            m.scan = "point";
            m.flavor = Flavor::cavity;
            m.base = p;
            write_point_artifacts(sol, detection_report(sol), matching_report(p), m, cavity_out,
                                  parse_format(cavity_format), elapsed_ms(t0));
            return 0;
        }

        if (*sweep_cmd) {
            const OutputFormat format = parse_format(sweep_format);
            RunManifest m;
            std::vector<AxisSpec> axes;
            if (!sweep_config.empty()) {
                const ReplayConfig cfg = read_replay_config(sweep_config);
                // keep the original identity so an override-free rerun is
                // bit-identical to the ingested file
                m.subcommand = cfg.subcommand;
                m.scan = cfg.scan;
                m.figure = cfg.figure;
                m.flavor = cfg.flavor;
                m.base = cfg.base;
                axes = cfg.axes;
                if (sweep_cmd->count("--flavor"))
                    m.flavor = sweep_flavor == "bare" ? Flavor::bare : Flavor::cavity;
                apply_overrides(sweep_cmd, sweep_flags, m.base);
            } else {
                m.subcommand = "sweep";
                m.scan = "grid";
                m.flavor = sweep_flavor == "bare" ? Flavor::bare : Flavor::cavity;
                if (m.flavor == Flavor::cavity) {
                    m.base = build_cavity(sweep_cmd, sweep_flags);
                } else {
                    static_cast<BareParams&>(m.base) = build_bare(sweep_cmd, sweep_flags);
                }
            }
            if (!sweep_axes.empty()) {
                axes.clear();
                for (const std::string& s : sweep_axes) axes.push_back(parse_axis_arg(s));
            }
            if (axes.empty()) throw UsageError("sweep needs at least one --axis");

            SweepResult result;
            const SweepOptions options{sweep_threads};
            if (m.scan == "matched_g_line") {
                if (axes.size() != 1) throw UsageError("the matched line scan takes one --axis");
                result = line_scan_fig6(m.base, axes[0], options);
            } else if (m.flavor == Flavor::bare) {
                result = sweep(m.base.atom_only(), axes, options);
            } else {
                result = sweep(m.base, axes, options);
            }
            const std::filesystem::path out =
                sweep_out.empty() ? std::string("sweep.") + std::string(to_string(format))
                                  : sweep_out;
            write_sweep_artifacts(result, m, out, format, elapsed_ms(t0));
            return 0;
        }

        if (*fig_cmd) {
            const OutputFormat format = parse_format(fig_format);
            const FigDefaults defaults = fig_defaults(fig_n);
            RunManifest m;
            m.subcommand = "fig" + std::to_string(fig_n);
            m.figure = m.subcommand;
            m.scan = defaults.scan;
            m.flavor = defaults.flavor;
            if (m.flavor == Flavor::cavity) {
                m.base = build_cavity(fig_cmd, fig_flags);
            } else {
                static_cast<BareParams&>(m.base) = build_bare(fig_cmd, fig_flags);
            }
            std::vector<AxisSpec> axes = defaults.axes;
            if (!fig_axes.empty()) {
                axes.clear();
                for (const std::string& s : fig_axes) axes.push_back(parse_axis_arg(s));
            }

            SweepResult result;
            const SweepOptions options{fig_threads};
            if (m.scan == "matched_g_line") {
                if (axes.size() != 1) throw UsageError("the matched line scan takes one --axis");
                result = line_scan_fig6(m.base, axes[0], options);
            } else if (m.flavor == Flavor::bare) {
                result = sweep(m.base.atom_only(), axes, options);
            } else {
                result = sweep(m.base, axes, options);
            }
            const std::filesystem::path out =
                fig_out.empty()
                    ? "fig" + std::to_string(fig_n) + "." + std::string(to_string(format))
                    : fig_out;
            write_sweep_artifacts(result, m, out, format, elapsed_ms(t0));
            return 0;
        }

        if (*opt_cmd) {
            Optimum optimum;
            const Flavor flavor = opt_flavor == "bare" ? Flavor::bare : Flavor::cavity;
            std::vector<FreeParameter> free;
            for (const std::string& s : opt_free) free.push_back(parse_free_parameter(s));
            if (free.empty())
                free = flavor == Flavor::bare
                           ? std::vector<FreeParameter>{FreeParameter::Gamma_1}
                           : std::vector<FreeParameter>{FreeParameter::V, FreeParameter::g};
            std::vector<Interval> bounds;
            for (FreeParameter p : free) bounds.push_back(default_bounds(p));
            for (const std::string& s : opt_bounds) {
                const auto [p, range] = parse_bounds_arg(s);
                bool hit = false;
                for (std::size_t i = 0; i < free.size(); ++i)
                    if (free[i] == p) {
                        bounds[i] = range;
                        hit = true;
                    }
                if (!hit)
                    throw UsageError("--bounds given for " + std::string(to_string(p)) +
                                     ", which is not a free parameter");
            }

            if (flavor == Flavor::bare && free.size() == 1 && free[0] == FreeParameter::Gamma_1) {
                optimum = optimize_bare(opt_flags.gamma_q, opt_flags.delta, bounds[0], opt_tol);
            } else {
                OptimizationProblem pb;
                pb.flavor = flavor;
                pb.fixed = build_cavity(opt_cmd, opt_flags);
                if (flavor == Flavor::bare)
                    pb.fixed.delta_c = pb.fixed.gamma_c = pb.fixed.V = pb.fixed.g = 0.0;
                pb.free_parameters = free;
                pb.bounds = bounds;
                pb.grid_per_axis = opt_grid;
                pb.max_iterations = opt_iters;
                pb.tolerance = opt_tol;
                pb.threads = opt_threads;
                optimum = optimize_cavity(pb);
            }
            const Json j = optimum_json(optimum);
            std::cout << j.dump(2) << "\n";
            if (!opt_out.empty()) write_text_file(opt_out, j.dump(2) + "\n");
            return 0;
        }

        if (*verify_cmd) {
            const VerifyResult v = verify_closed_forms(verify_draws);
            const Json j = verify_json(v);
            std::cout << j.dump(2) << "\n";
            if (!verify_out.empty()) write_text_file(verify_out, j.dump(2) + "\n");
            return v.max_rel_deviation < kOracleAgreementTol ? 0 : 1;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
