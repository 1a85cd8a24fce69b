#ifndef WQED_IO_HPP
#define WQED_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "wqed/model.hpp"
#include "wqed/optimize.hpp"
#include "wqed/oracle.hpp"
#include "wqed/params.hpp"
#include "wqed/sweep.hpp"

namespace wqed {

using Json = nlohmann::ordered_json;

enum class OutputFormat { csv, json };
OutputFormat parse_format(std::string_view name);  // throws UsageError
std::string_view to_string(OutputFormat f);

// What a run was, minus anything volatile. The sidecar manifest adds the
// timestamp and wall time so the data files themselves stay reproducible.
struct RunManifest {
    std::string subcommand;  // bare|cavity|sweep|fig2..fig6|optimize|verify
    std::string scan;        // point|grid|matched_g_line|optimize|verify
    std::string figure;      // "fig2".."fig6", or empty
    Flavor flavor = Flavor::cavity;
    CavityParams base;  // angular snapshot
    std::vector<AxisSpec> axes;
    std::string timestamp;     // sidecar only
    double wall_time_ms = 0.0; // sidecar only
};

Json manifest_json(const RunManifest& m);  // deterministic part only
Json params_json(const CavityParams& p, Flavor flavor);
Json amplitudes_json(const ScatterSolution& s);
Json report_json(const DetectionReport& r);
Json matching_json(const MatchingReport& m);
Json optimum_json(const Optimum& o);
Json verify_json(const VerifyResult& v);

// Full data artifacts.
std::string sweep_csv(const SweepResult& result);
Json sweep_json(const SweepResult& result, const RunManifest& manifest);
Json point_json(const ScatterSolution& s, const DetectionReport& r,
                const std::optional<MatchingReport>& matching, const RunManifest& manifest);
std::string point_csv(const ScatterSolution& s, const DetectionReport& r);

void write_text_file(const std::filesystem::path& path, std::string_view text);  // throws IoError

// Writes <path>.manifest.json next to a data file; includes the volatile
// fields. Written even when some grid cells were degenerate.
void write_manifest_sidecar(const std::filesystem::path& data_path, const RunManifest& m,
                            OutputFormat format);

// Re-ingesting a JSON data file as a config: reruns bit-identically.
struct ReplayConfig {
    std::string subcommand;
    std::string scan;
    std::string figure;
    Flavor flavor = Flavor::cavity;
    CavityParams base;  // angular, taken verbatim from the manifest
    std::vector<AxisSpec> axes;
};

ReplayConfig read_replay_config(const std::filesystem::path& json_data_file);  // throws IoError
SweepResult run_replay(const ReplayConfig& config, unsigned threads = 0);

} // namespace wqed

#endif // WQED_IO_HPP
