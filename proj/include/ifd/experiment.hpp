#pragma once

// Scenario runner behind ifd-sim: flat dotted-key configs, seeded sweeps,
// CSV rows and a JSON summary.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifd/protocol.hpp"

namespace ifd {

inline constexpr const char* kLibraryVersion = "0.1.0";

enum class Scenario {
    n1_sweep,
    n2_map,
    multi_identical,
    multi_random,
    histogram,
    majorana_trajectory,
    projective_compare,
    coefficients,
    quantized_check,
};

Scenario parse_scenario(const std::string& name);
std::string scenario_name(Scenario s);

enum class RandomKind { uniform, binary };

struct ExperimentConfig {
    Scenario scenario = Scenario::n1_sweep;

    // Protocol. `thetas` overrides `theta` when non-empty.
    int n = 1;
    double theta = 3.141592653589793;
    std::vector<double> thetas;
    std::string initial;  // "0", "1", "2", "thermal"; empty picks per model

    ModelKind model = ModelKind::ideal;
    std::string sample;  // "sample1", "sample2", "closed"; empty picks per scenario
    std::map<std::string, double> decoherence_overrides;
    std::map<std::string, double> pulse_overrides;

    // Sweep grid.
    int points = 0;  // theta grid size for n1_sweep / n2_map; 0 picks the default
    double theta_max = 4 * 3.141592653589793;
    int m = 0;  // M; 0 picks the default
    int n_min = 1;
    int n_max = 25;
    RandomKind random_kind = RandomKind::uniform;
    std::int64_t shots = 1000000;

    std::vector<std::string> majorana_modes{"ideal", "averaged", "dissipative"};
    std::string majorana_average = "identical";  // identical, uniform, binary

    int quantized_segments_max = 5;
    int quantized_photons_max = 4;
    double quantized_g = 2.5e7;     // rad/s
    double quantized_tb = 40e-9;    // s

    std::uint64_t rng_seed = 0;
    std::string output_dir = ".";

    // Resolved key/value echo for the summary.
    std::map<std::string, std::string> echo;
};

// Parses `key = value` lines; '#' starts a comment. Unknown keys, malformed
// values and out-of-range settings throw ConfigError.
ExperimentConfig parse_config(const std::string& text, Scenario scenario);
ExperimentConfig load_config(const std::string& path, Scenario scenario);

struct SweepResult {
    std::string csv_name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    nlohmann::json aggregates = nlohmann::json::object();
    // Set when a numeric self-check of the scenario failed.
    bool tolerance_failure = false;
};

// Runs the scenario with `threads` workers; rows are independent of the count.
SweepResult run_scenario(const ExperimentConfig& cfg, int threads = 1);

std::string format_number(double x);
std::string to_csv(const SweepResult& r);
nlohmann::json summary_json(const ExperimentConfig& cfg, const SweepResult& r);

// Writes <output_dir>/<csv_name> and <output_dir>/summary.json.
void emit(const ExperimentConfig& cfg, const SweepResult& r);

// Point-level seed for grid point (N, m).
std::uint64_t sub_seed(std::uint64_t seed, int n, int m);

// theta_{j,m} for j = 1..N drawn from sub_seed(seed, N, m).
std::vector<double> random_thetas(std::uint64_t seed, int n, int m, RandomKind kind);

// Protocol spec for one grid point with the config's model settings.
ProtocolSpec point_spec(const ExperimentConfig& cfg, int n, const std::vector<double>& thetas);

// Decoherence parameters the config resolves to for protocol size n.
DecoherenceModel resolved_decoherence(const ExperimentConfig& cfg, int n);

}  // namespace ifd
