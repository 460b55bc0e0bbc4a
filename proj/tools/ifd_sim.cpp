#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "ifd/errors.hpp"
#include "ifd/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

int default_threads() {
    if (const char* env = std::getenv("IFD_SIM_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
        std::cerr << "ignoring invalid IFD_SIM_THREADS='" << env << "'\n";
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interaction-free detection simulator"};
    std::string scenario;
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    int threads = default_threads();
    app.add_option("scenario", scenario,
                   "n1_sweep | n2_map | multi_identical | multi_random | histogram | majorana_trajectory | "
                   "projective_compare | coefficients | quantized_check")
        ->required();
    app.add_option("--config", config_path, "flat key = value config file")->required();
    auto* seed_opt = app.add_option("--seed", seed, "overrides rng_seed");
    auto* out_opt = app.add_option("--out", out_dir, "overrides output_dir");
    app.add_option("--threads", threads, "worker threads (default: IFD_SIM_THREADS or all cores)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        ifd::ExperimentConfig cfg = ifd::load_config(config_path, ifd::parse_scenario(scenario));
        if (*seed_opt) cfg.rng_seed = seed;
        if (*out_opt) cfg.output_dir = out_dir;
        cfg.echo["rng_seed"] = std::to_string(cfg.rng_seed);
        cfg.echo["output_dir"] = cfg.output_dir;

        const ifd::SweepResult r = ifd::run_scenario(cfg, threads);
        ifd::emit(cfg, r);
        std::cout << "wrote " << r.rows.size() << " rows to " << cfg.output_dir << "/" << r.csv_name << "\n";
        if (r.tolerance_failure) {
            std::cerr << "numeric tolerance check failed; see summary.json\n";
            return kExitNumeric;
        }
    } catch (const ifd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ifd::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const ifd::DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
