#include "wqed/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "wqed/errors.hpp"
#include "wqed/version.hpp"

namespace wqed {

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string_view flavor_name(Flavor f) { return f == Flavor::bare ? "bare" : "cavity"; }

Flavor parse_flavor(const std::string& name) {
    if (name == "bare") return Flavor::bare;
    if (name == "cavity") return Flavor::cavity;
    throw IoError("unrecognized flavor '" + name + "' in data file");
}

Json axis_json(const AxisSpec& a) {
    return Json{{"parameter", std::string(to_string(a.parameter))},
                {"start", a.start},
                {"stop", a.stop},
                {"count", a.count}};
}

Json pair_json(const cplx& z) { return Json::array({z.real(), z.imag()}); }

void append_csv_row(std::string& out, const std::string& p1, const std::string& p2,
                    const SweepCell& cell) {
    out += p1;
    out += ',';
    out += p2;
    out += ',';
    if (cell.ok) {
        const DetectionReport& r = cell.report;
        out += g17(r.eta);
        out += ',';
        out += g17(r.p_t);
        out += ',';
        out += g17(r.p_r);
        out += ',';
        out += g17(r.p_q);
        out += ',';
        out += g17(r.p_a);
        out += ',';
        out += g17(r.p_b);
        out += ',';
        out += g17(r.conversion);
        out += ",ok\n";
    } else {
        // empty numeric fields: a degenerate point is not a zero
        out += ",,,,,,,degenerate\n";
    }
}

constexpr std::string_view kCsvHeader = "param1,param2,eta,p_t,p_r,p_q,p_a,p_b,conversion,status\n";

} // namespace

OutputFormat parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw UsageError("unsupported output format '" + std::string(name) + "' (use csv or json)");
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

Json params_json(const CavityParams& p, Flavor flavor) {
    Json user{{"gamma_q", to_user(p.gamma_q)}, {"h", to_user(p.h)},
              {"delta", to_user(p.delta)},     {"Gamma1", to_user(p.gamma1())}};
    Json angular{{"gamma_q", p.gamma_q}, {"h", p.h}, {"delta", p.delta}, {"Gamma1", p.gamma1()}};
    if (flavor == Flavor::cavity) {
        user["gamma_c"] = to_user(p.gamma_c);
        user["V"] = to_user(p.V);
        user["g"] = to_user(p.g);
        user["delta_c"] = to_user(p.delta_c);
        user["Gamma2"] = to_user(p.gamma2());
        angular["gamma_c"] = p.gamma_c;
        angular["V"] = p.V;
        angular["g"] = p.g;
        angular["delta_c"] = p.delta_c;
        angular["Gamma2"] = p.gamma2();
    }
    return Json{{"user", std::move(user)}, {"angular", std::move(angular)}, {"v_g", p.v_g}};
}

Json manifest_json(const RunManifest& m) {
    Json j{{"tool", "wqed"},
           {"version", std::string(kVersion)},
           {"subcommand", m.subcommand},
           {"flavor", std::string(flavor_name(m.flavor))},
           {"scan", m.scan}};
    if (!m.figure.empty()) j["figure"] = m.figure;
    j["parameters"] = params_json(m.base, m.flavor);
    return j;
}

Json amplitudes_json(const ScatterSolution& s) {
    Json j{{"t", pair_json(s.t)}, {"r", pair_json(s.r)}, {"e_q", pair_json(s.e_q)}};
    if (s.flavor == Flavor::cavity) {
        j["e_a"] = pair_json(s.e_a);
        j["e_b"] = pair_json(s.e_b);
    }
    return j;
}

Json report_json(const DetectionReport& r) {
    return Json{{"eta", r.eta},          {"p_t", r.p_t},
                {"p_r", r.p_r},          {"p_q", r.p_q},
                {"p_a", r.p_a},          {"p_b", r.p_b},
                {"conversion", r.conversion}, {"weight_sum", r.weight_sum}};
}

Json matching_json(const MatchingReport& m) {
    Json j{{"phase_residual", m.phase_residual},
           {"magnitude_residual", m.magnitude_residual},
           {"magnitude_scale", m.magnitude_scale}};
    if (m.g_opt)
        j["g_opt"] = Json{{"angular", *m.g_opt}, {"user", to_user(*m.g_opt)}};
    else
        j["g_opt"] = nullptr;
    return j;
}

Json optimum_json(const Optimum& o) {
    Json location = Json::object();
    for (std::size_t i = 0; i < o.parameters.size(); ++i)
        location[std::string(to_string(o.parameters[i]))] = o.location[i];
    Json j{{"location", std::move(location)},
           {"eta_max", o.eta_max},
           {"iterations", o.iterations},
           {"converged", o.converged},
           {"on_boundary", o.on_boundary},
           {"stop_reason", o.stop_reason}};
    if (o.matching) j["matching"] = matching_json(*o.matching);
    return j;
}

Json verify_json(const VerifyResult& v) {
    return Json{{"draws", v.draws},
                {"max_relative_deviation", v.max_rel_deviation},
                {"max_residual_norm", v.max_residual_norm},
                {"tolerance", kOracleAgreementTol},
                {"pass", v.max_rel_deviation < kOracleAgreementTol}};
}

std::string sweep_csv(const SweepResult& result) {
    std::string out{kCsvHeader};
    const bool two = result.axes.size() == 2;
    const int n0 = result.axes[0].count;
    const int n1 = two ? result.axes[1].count : 1;
    for (int i0 = 0; i0 < n0; ++i0) {
        const std::string p1 = g17(axis_value(result.axes[0], i0));
        for (int i1 = 0; i1 < n1; ++i1) {
            const std::string p2 = two ? g17(axis_value(result.axes[1], i1)) : std::string();
            append_csv_row(out, p1, p2, result.cells[result.index(i0, i1)]);
        }
    }
    return out;
}

Json sweep_json(const SweepResult& result, const RunManifest& manifest) {
    Json axes = Json::array();
    for (const AxisSpec& a : result.axes) axes.push_back(axis_json(a));

    Json cells = Json::array();
    const bool two = result.axes.size() == 2;
    const int n0 = result.axes[0].count;
    const int n1 = two ? result.axes[1].count : 1;
    for (int i0 = 0; i0 < n0; ++i0)
        for (int i1 = 0; i1 < n1; ++i1) {
            const SweepCell& cell = result.cells[result.index(i0, i1)];
            Json c{{"param1", axis_value(result.axes[0], i0)}};
            if (two) c["param2"] = axis_value(result.axes[1], i1);
            c["status"] = cell.status;
            if (cell.ok) {
                const Json rep = report_json(cell.report);
                for (auto it = rep.begin(); it != rep.end(); ++it) c[it.key()] = it.value();
                c["amplitudes"] = amplitudes_json(cell.solution);
            }
            cells.push_back(std::move(c));
        }

    return Json{{"manifest", manifest_json(manifest)},
                {"axes", std::move(axes)},
                {"cells", std::move(cells)}};
}

Json point_json(const ScatterSolution& s, const DetectionReport& r,
                const std::optional<MatchingReport>& matching, const RunManifest& manifest) {
    Json j{{"manifest", manifest_json(manifest)},
           {"amplitudes", amplitudes_json(s)},
           {"report", report_json(r)}};
    if (matching) j["matching"] = matching_json(*matching);
    return j;
}

std::string point_csv(const ScatterSolution& s, const DetectionReport& r) {
    SweepCell cell;
    cell.report = r;
    cell.solution = s;
    cell.ok = true;
    cell.status = "ok";
    std::string out{kCsvHeader};
    append_csv_row(out, "", "", cell);
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw IoError("failed while writing " + path.string());
}

void write_manifest_sidecar(const std::filesystem::path& data_path, const RunManifest& m,
                            OutputFormat format) {
    Json j = manifest_json(m);
    j["timestamp"] = m.timestamp;
    j["wall_time_ms"] = m.wall_time_ms;
    j["data_file"] = data_path.filename().string();
    j["format"] = std::string(to_string(format));
    Json axes = Json::array();
    for (const AxisSpec& a : m.axes) axes.push_back(axis_json(a));
    j["axes"] = std::move(axes);
    std::filesystem::path side = data_path;
    side += ".manifest.json";
    write_text_file(side, j.dump(2) + "\n");
}

ReplayConfig read_replay_config(const std::filesystem::path& json_data_file) {
    std::ifstream f(json_data_file, std::ios::binary);
    if (!f) throw IoError("cannot open " + json_data_file.string());
    Json j;
    try {
        j = Json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("cannot parse " + json_data_file.string() + ": " + e.what());
    }
    try {
        const Json& m = j.at("manifest");
        ReplayConfig cfg;
        cfg.subcommand = m.at("subcommand").get<std::string>();
        cfg.scan = m.at("scan").get<std::string>();
        cfg.figure = m.value("figure", std::string());
        cfg.flavor = parse_flavor(m.at("flavor").get<std::string>());
        // angular values verbatim: re-ingesting is exact, no unit round trip
        const Json& ang = m.at("parameters").at("angular");
        cfg.base.gamma_q = ang.at("gamma_q").get<double>();
        cfg.base.h = ang.at("h").get<double>();
        cfg.base.delta = ang.at("delta").get<double>();
        cfg.base.v_g = m.at("parameters").at("v_g").get<double>();
        if (cfg.flavor == Flavor::cavity) {
            cfg.base.gamma_c = ang.at("gamma_c").get<double>();
            cfg.base.V = ang.at("V").get<double>();
            cfg.base.g = ang.at("g").get<double>();
            cfg.base.delta_c = ang.at("delta_c").get<double>();
        }
        for (const Json& a : j.at("axes")) {
            AxisSpec axis;
            axis.parameter = parse_sweep_parameter(a.at("parameter").get<std::string>());
            axis.start = a.at("start").get<double>();
            axis.stop = a.at("stop").get<double>();
            axis.count = a.at("count").get<int>();
            cfg.axes.push_back(axis);
        }
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("data file " + json_data_file.string() +
                      " is missing replay fields: " + e.what());
    }
}

SweepResult run_replay(const ReplayConfig& config, unsigned threads) {
    SweepOptions options{threads};
    if (config.scan == "matched_g_line") {
        if (config.axes.size() != 1)
            throw IoError("matched-line replay expects exactly one axis");
        return line_scan_fig6(config.base, config.axes[0], options);
    }
    if (config.scan != "grid") throw IoError("replay supports sweep data files only");
    if (config.flavor == Flavor::bare)
        return sweep(config.base.atom_only(), config.axes, options);
    return sweep(config.base, config.axes, options);
}

} // namespace wqed
