#include "ifd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "ifd/errors.hpp"
#include "ifd/majorana.hpp"
#include "ifd/metrics.hpp"
#include "ifd/quantized.hpp"

namespace ifd {

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<std::pair<Scenario, std::string>>& scenario_names() {
    static const std::vector<std::pair<Scenario, std::string>> names{
        {Scenario::n1_sweep, "n1_sweep"},
        {Scenario::n2_map, "n2_map"},
        {Scenario::multi_identical, "multi_identical"},
        {Scenario::multi_random, "multi_random"},
        {Scenario::histogram, "histogram"},
        {Scenario::majorana_trajectory, "majorana_trajectory"},
        {Scenario::projective_compare, "projective_compare"},
        {Scenario::coefficients, "coefficients"},
        {Scenario::quantized_check, "quantized_check"},
    };
    return names;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

double parse_plain(const std::string& key, const std::string& v) {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
        throw ConfigError("invalid number for " + key + ": '" + v + "'");
    }
    return x;
}

// Plain numbers or multiples of pi: "pi", "3pi/4", "0.5*pi", "pi/2".
double parse_angle(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    const auto at = v.find("pi");
    if (at == std::string::npos) return parse_plain(key, v);
    std::string coef = trim(v.substr(0, at));
    if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
    double x = kPi;
    if (coef == "-") {
        x = -kPi;
    } else if (!coef.empty()) {
        x *= parse_plain(key, coef);
    }
    const std::string rest = trim(v.substr(at + 2));
    if (!rest.empty()) {
        if (rest[0] != '/') throw ConfigError("invalid angle for " + key + ": '" + raw + "'");
        const double d = parse_plain(key, trim(rest.substr(1)));
        if (d == 0.0) throw ConfigError("zero denominator in " + key);
        x /= d;
    }
    return x;
}

long long parse_int(const std::string& key, const std::string& v) {
    long long x = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || ptr != end) throw ConfigError("invalid integer for " + key + ": '" + v + "'");
    return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t x = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || ptr != end) throw ConfigError("invalid unsigned integer for " + key + ": '" + v + "'");
    return x;
}

ModelKind parse_model(const std::string& v) {
    if (v == "ideal") return ModelKind::ideal;
    if (v == "lindblad") return ModelKind::lindblad;
    if (v == "lindblad_depol") return ModelKind::lindblad_depol;
    throw ConfigError("model.kind must be ideal, lindblad or lindblad_depol, got '" + v + "'");
}

std::string model_name(ModelKind k) {
    switch (k) {
        case ModelKind::ideal:
            return "ideal";
        case ModelKind::lindblad:
            return "lindblad";
        case ModelKind::lindblad_depol:
            return "lindblad_depol";
    }
    return "ideal";
}

const std::vector<std::string> kDecoherenceKeys{"f01_hz",    "f12_hz",    "gamma10_hz", "gamma21_hz",
                                                "gphi10_hz", "gphi21_hz", "gphi02_hz",  "temperature_k"};
const std::vector<std::string> kPulseKeys{"splitter_ns", "bpulse_ns", "gap_ns", "sampling_rate_hz"};

void apply_defaults(ExperimentConfig& c) {
    switch (c.scenario) {
        case Scenario::n1_sweep:
            c.n = 1;
            c.points = 181;
            break;
        case Scenario::n2_map:
            c.n = 2;
            c.points = 161;
            break;
        case Scenario::multi_identical:
            c.m = 180;
            break;
        case Scenario::multi_random:
        case Scenario::majorana_trajectory:
            c.m = 400;
            break;
        case Scenario::coefficients:
            c.n_max = 4;
            break;
        default:
            break;
    }
}

void set_key(ExperimentConfig& c, const std::string& key, const std::string& v) {
    if (key == "scenario") {
        if (parse_scenario(v) != c.scenario) throw ConfigError("config scenario '" + v + "' does not match the command");
    } else if (key == "protocol.n") {
        c.n = static_cast<int>(parse_int(key, v));
    } else if (key == "protocol.theta") {
        c.theta = parse_angle(key, v);
    } else if (key == "protocol.thetas") {
        c.thetas.clear();
        for (const auto& item : split(v, ',')) c.thetas.push_back(parse_angle(key, item));
    } else if (key == "protocol.initial") {
        if (v != "0" && v != "1" && v != "2" && v != "thermal") {
            throw ConfigError("protocol.initial must be 0, 1, 2 or thermal");
        }
        c.initial = v;
    } else if (key == "model.kind") {
        c.model = parse_model(v);
    } else if (key == "model.sample") {
        if (v != "sample1" && v != "sample2" && v != "closed") {
            throw ConfigError("model.sample must be sample1, sample2 or closed");
        }
        c.sample = v;
    } else if (key.rfind("decoherence.", 0) == 0) {
        const std::string sub = key.substr(12);
        if (std::find(kDecoherenceKeys.begin(), kDecoherenceKeys.end(), sub) == kDecoherenceKeys.end()) {
            throw ConfigError("unknown key: " + key);
        }
        c.decoherence_overrides[sub] = parse_plain(key, v);
    } else if (key.rfind("pulse.", 0) == 0) {
        const std::string sub = key.substr(6);
        if (std::find(kPulseKeys.begin(), kPulseKeys.end(), sub) == kPulseKeys.end()) {
            throw ConfigError("unknown key: " + key);
        }
        c.pulse_overrides[sub] = parse_plain(key, v);
    } else if (key == "sweep.points") {
        c.points = static_cast<int>(parse_int(key, v));
    } else if (key == "sweep.theta_max") {
        c.theta_max = parse_angle(key, v);
    } else if (key == "sweep.m") {
        c.m = static_cast<int>(parse_int(key, v));
    } else if (key == "sweep.n_min") {
        c.n_min = static_cast<int>(parse_int(key, v));
    } else if (key == "sweep.n_max") {
        c.n_max = static_cast<int>(parse_int(key, v));
    } else if (key == "sweep.random_kind") {
        if (v == "uniform") {
            c.random_kind = RandomKind::uniform;
        } else if (v == "binary") {
            c.random_kind = RandomKind::binary;
        } else {
            throw ConfigError("sweep.random_kind must be uniform or binary");
        }
    } else if (key == "sweep.shots") {
        c.shots = parse_int(key, v);
    } else if (key == "majorana.modes") {
        c.majorana_modes = split(v, ',');
    } else if (key == "majorana.average") {
        c.majorana_average = v;
    } else if (key == "quantized.segments_max") {
        c.quantized_segments_max = static_cast<int>(parse_int(key, v));
    } else if (key == "quantized.photons_max") {
        c.quantized_photons_max = static_cast<int>(parse_int(key, v));
    } else if (key == "quantized.g_rad_s") {
        c.quantized_g = parse_plain(key, v);
    } else if (key == "quantized.tb_ns") {
        c.quantized_tb = parse_plain(key, v) * 1e-9;
    } else if (key == "rng_seed") {
        c.rng_seed = parse_u64(key, v);
    } else if (key == "output_dir") {
        c.output_dir = v;
    } else {
        throw ConfigError("unknown key: " + key);
    }
}

void validate(const ExperimentConfig& c) {
    if (c.n < 1) throw ConfigError("protocol.n must be at least 1");
    if (c.scenario == Scenario::n1_sweep && c.n != 1) throw ConfigError("n1_sweep runs N = 1");
    if (c.scenario == Scenario::n2_map && c.n != 2) throw ConfigError("n2_map runs N = 2");
    if (!c.thetas.empty() && static_cast<int>(c.thetas.size()) != c.n) {
        throw ConfigError("protocol.thetas needs exactly protocol.n entries");
    }
    if (c.points < 1 && (c.scenario == Scenario::n1_sweep || c.scenario == Scenario::n2_map)) {
        throw ConfigError("sweep.points must be at least 1");
    }
    if (!(c.theta_max >= 0.0)) throw ConfigError("sweep.theta_max must be non-negative");
    if (c.m < 1 && (c.scenario == Scenario::multi_identical || c.scenario == Scenario::multi_random ||
                    c.scenario == Scenario::majorana_trajectory)) {
        throw ConfigError("sweep.m must be at least 1");
    }
    if (c.n_min < 1 || c.n_max < c.n_min) throw ConfigError("sweep needs 1 <= n_min <= n_max");
    if (c.scenario == Scenario::coefficients && c.n_max > 25) throw ConfigError("coefficients support N <= 25");
    if (c.shots < 1) throw ConfigError("sweep.shots must be at least 1");
    for (const auto& mode : c.majorana_modes) {
        if (mode != "ideal" && mode != "averaged" && mode != "dissipative") {
            throw ConfigError("majorana.modes entries must be ideal, averaged or dissipative");
        }
    }
    if (c.majorana_modes.empty()) throw ConfigError("majorana.modes is empty");
    if (c.majorana_average != "identical" && c.majorana_average != "uniform" && c.majorana_average != "binary") {
        throw ConfigError("majorana.average must be identical, uniform or binary");
    }
    if (c.quantized_segments_max < 1 || c.quantized_photons_max < 1) {
        throw ConfigError("quantized limits must be at least 1");
    }
    if (!(c.quantized_g >= 0.0) || !(c.quantized_tb >= 0.0)) throw ConfigError("quantized coupling must be non-negative");
}

std::string join_numbers(const std::vector<double>& xs, char sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += format_number(xs[i]);
    }
    return out;
}

std::map<std::string, std::string> make_echo(const ExperimentConfig& c) {
    std::map<std::string, std::string> e;
    e["scenario"] = scenario_name(c.scenario);
    e["protocol.n"] = std::to_string(c.n);
    e["protocol.theta"] = format_number(c.theta);
    if (!c.thetas.empty()) e["protocol.thetas"] = join_numbers(c.thetas, ',');
    if (!c.initial.empty()) e["protocol.initial"] = c.initial;
    e["model.kind"] = model_name(c.model);
    if (!c.sample.empty()) e["model.sample"] = c.sample;
    for (const auto& [k, v] : c.decoherence_overrides) e["decoherence." + k] = format_number(v);
    for (const auto& [k, v] : c.pulse_overrides) e["pulse." + k] = format_number(v);
    e["sweep.points"] = std::to_string(c.points);
    e["sweep.theta_max"] = format_number(c.theta_max);
    e["sweep.m"] = std::to_string(c.m);
    e["sweep.n_min"] = std::to_string(c.n_min);
    e["sweep.n_max"] = std::to_string(c.n_max);
    e["sweep.random_kind"] = c.random_kind == RandomKind::uniform ? "uniform" : "binary";
    e["sweep.shots"] = std::to_string(c.shots);
    std::string modes;
    for (std::size_t i = 0; i < c.majorana_modes.size(); ++i) modes += (i ? "," : "") + c.majorana_modes[i];
    e["majorana.modes"] = modes;
    e["majorana.average"] = c.majorana_average;
    e["quantized.segments_max"] = std::to_string(c.quantized_segments_max);
    e["quantized.photons_max"] = std::to_string(c.quantized_photons_max);
    e["quantized.g_rad_s"] = format_number(c.quantized_g);
    e["quantized.tb_ns"] = format_number(c.quantized_tb * 1e9);
    e["rng_seed"] = std::to_string(c.rng_seed);
    e["output_dir"] = c.output_dir;
    return e;
}

// Runs fn(i) for i in [0, count) on `threads` workers. The first failing
// index (in index order) is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = count;
    std::exception_ptr failure;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<double> protocol_thetas(const ExperimentConfig& c, int n) {
    if (!c.thetas.empty() && static_cast<int>(c.thetas.size()) == n) return c.thetas;
    return std::vector<double>(static_cast<std::size_t>(n), c.theta);
}

std::string optional_ratio(const std::function<double()>& f) {
    try {
        return format_number(f());
    } catch (const UndefinedRatioError&) {
        return "";
    }
}

nlohmann::json optional_json(const std::function<double()>& f) {
    try {
        return f();
    } catch (const UndefinedRatioError&) {
        return nullptr;
    }
}

nlohmann::json outcome_json(const OutcomeProbabilities& p) {
    return {{"p0", p.p0},
            {"p1", p.p1},
            {"p2", p.p2},
            {"pr", optional_json([&] { return pr_nr(p).first; })},
            {"nr", optional_json([&] { return pr_nr(p).second; })},
            {"eta_c", optional_json([&] { return eta_coherent(p); })}};
}

std::vector<std::string> outcome_cells(const OutcomeProbabilities& p) {
    return {format_number(p.p0),
            format_number(p.p1),
            format_number(p.p2),
            optional_ratio([&] { return pr_nr(p).first; }),
            optional_ratio([&] { return pr_nr(p).second; }),
            optional_ratio([&] { return eta_coherent(p); })};
}

SweepResult run_n1_sweep(const ExperimentConfig& c, int threads) {
    SweepResult r;
    r.csv_name = "n1_sweep.csv";
    r.header = {"theta_rad", "p0", "p1", "p2", "pr", "nr", "eta_c"};
    const auto pts = static_cast<std::size_t>(c.points);
    std::vector<double> grid(pts);
    for (std::size_t i = 0; i < pts; ++i) grid[i] = pts == 1 ? 0.0 : c.theta_max * static_cast<double>(i) / static_cast<double>(pts - 1);
    std::vector<OutcomeProbabilities> out(pts);
    parallel_for(pts, threads, [&](std::size_t i) { out[i] = run_protocol(point_spec(c, 1, {grid[i]})); });

    std::vector<double> g_pi;
    std::vector<double> p_pi;
    for (std::size_t i = 0; i < pts; ++i) {
        std::vector<std::string> row{format_number(grid[i])};
        const auto cells = outcome_cells(out[i]);
        row.insert(row.end(), cells.begin(), cells.end());
        r.rows.push_back(std::move(row));
        if (grid[i] <= kPi * (1 + 1e-12)) {
            g_pi.push_back(grid[i]);
            p_pi.push_back(out[i].p0);
        }
    }
    r.aggregates["at_pi"] = outcome_json(run_protocol(point_spec(c, 1, {kPi})));
    r.aggregates["plateau_area_0_pi"] = plateau_area(g_pi, p_pi);
    return r;
}

SweepResult run_n2_map(const ExperimentConfig& c, int threads) {
    SweepResult r;
    r.csv_name = "n2_map.csv";
    r.header = {"theta1_rad", "theta2_rad", "p0", "p1", "p2", "pr", "nr", "eta_c"};
    const auto pts = static_cast<std::size_t>(c.points);
    std::vector<double> grid(pts);
    for (std::size_t i = 0; i < pts; ++i) grid[i] = pts == 1 ? 0.0 : c.theta_max * static_cast<double>(i) / static_cast<double>(pts - 1);
    std::vector<OutcomeProbabilities> out(pts * pts);
    parallel_for(pts * pts, threads, [&](std::size_t k) {
        out[k] = run_protocol(point_spec(c, 2, {grid[k / pts], grid[k % pts]}));
    });
    for (std::size_t k = 0; k < pts * pts; ++k) {
        std::vector<std::string> row{format_number(grid[k / pts]), format_number(grid[k % pts])};
        const auto cells = outcome_cells(out[k]);
        row.insert(row.end(), cells.begin(), cells.end());
        r.rows.push_back(std::move(row));
    }
    r.aggregates["at_pi_pi"] = outcome_json(run_protocol(point_spec(c, 2, {kPi, kPi})));
    return r;
}

SweepResult run_multi(const ExperimentConfig& c, int threads, bool random) {
    SweepResult r;
    r.csv_name = "multi.csv";
    r.header = {"n", "m", "theta_spec", "p0", "p1", "p2"};
    const int n_count = c.n_max - c.n_min + 1;
    const auto per_n = static_cast<std::size_t>(c.m);
    const std::size_t total = static_cast<std::size_t>(n_count) * per_n;
    std::vector<OutcomeProbabilities> out(total);
    std::vector<std::vector<double>> thetas(total);
    parallel_for(total, threads, [&](std::size_t k) {
        const int n = c.n_min + static_cast<int>(k / per_n);
        const int m = 1 + static_cast<int>(k % per_n);
        thetas[k] = random ? random_thetas(c.rng_seed, n, m, c.random_kind)
                           : std::vector<double>(static_cast<std::size_t>(n), m * kPi / c.m);
        out[k] = run_protocol(point_spec(c, n, thetas[k]));
    });
    nlohmann::json per = nlohmann::json::array();
    for (int ni = 0; ni < n_count; ++ni) {
        const int n = c.n_min + ni;
        std::vector<double> p0s;
        for (std::size_t mi = 0; mi < per_n; ++mi) {
            const std::size_t k = static_cast<std::size_t>(ni) * per_n + mi;
            const std::string spec = random ? join_numbers(thetas[k], ';') : format_number(thetas[k][0]);
            r.rows.push_back({std::to_string(n), std::to_string(mi + 1), spec, format_number(out[k].p0),
                              format_number(out[k].p1), format_number(out[k].p2)});
            p0s.push_back(out[k].p0);
        }
        const auto st = distribution_stats(p0s);
        nlohmann::json entry{{"n", n},
                             {"mean_p0", st.mean},
                             {"std_p0", st.std},
                             {"min_p0", *std::min_element(p0s.begin(), p0s.end())},
                             {"max_p0", *std::max_element(p0s.begin(), p0s.end())}};
        if (!random) {
            // m = M is theta = pi.
            const auto& at_pi = out[static_cast<std::size_t>(ni) * per_n + per_n - 1];
            entry["at_pi"] = outcome_json(at_pi);
        }
        per.push_back(entry);
    }
    r.aggregates["per_n"] = per;
    return r;
}

SweepResult run_histogram(const ExperimentConfig& c) {
    SweepResult r;
    r.csv_name = "histogram.csv";
    r.header = {"detector", "count", "fraction"};
    const auto thetas = protocol_thetas(c, c.n);
    const OutcomeProbabilities p = run_protocol(point_spec(c, c.n, thetas));
    const ShotCounts counts = sample_shots(p, c.shots, sub_seed(c.rng_seed, c.n, 0));
    for (int k = 0; k < 3; ++k) {
        r.rows.push_back({"D" + std::to_string(k), std::to_string(counts[k]),
                          format_number(static_cast<double>(counts[k]) / static_cast<double>(counts.total))});
    }
    r.aggregates["probabilities"] = outcome_json(p);
    r.aggregates["counts"] = {{"d0", counts.d0}, {"d1", counts.d1}, {"d2", counts.d2}, {"total", counts.total}};
    const auto at_pi = run_protocol(point_spec(c, c.n, std::vector<double>(static_cast<std::size_t>(c.n), kPi)));
    const auto at_zero = run_protocol(point_spec(c, c.n, std::vector<double>(static_cast<std::size_t>(c.n), 0.0)));
    try {
        const ConfusionMatrix cm = confusion_matrix(at_pi, at_zero);
        r.aggregates["confusion"] = {{"tpr", cm.tpr}, {"fnr", cm.fnr}, {"fpr", cm.fpr}, {"tnr", cm.tnr}};
    } catch (const UndefinedRatioError&) {
        r.aggregates["confusion"] = nullptr;
    }
    r.aggregates["eta_c_at_pi"] = optional_json([&] { return eta_coherent(at_pi); });
    if (c.model != ModelKind::ideal) {
        const double t = sequence_duration(point_spec(c, c.n, thetas));
        r.aggregates["sensing_time_s"] = t;
        r.aggregates["dark_count_per_us"] = optional_json([&] { return dark_count_rate(pr_nr(at_zero).first, t); });
    }
    return r;
}

PureState pure_initial(const ExperimentConfig& c) {
    if (c.initial == "1") return PureState::basis(1);
    if (c.initial == "2") return PureState::basis(2);
    return PureState::basis(0);
}

std::vector<PureState> averaged_checkpoints(const ExperimentConfig& c, int n, int threads) {
    const auto count = static_cast<std::size_t>(c.m);
    std::vector<std::vector<PureState>> runs(count);
    parallel_for(count, threads, [&](std::size_t i) {
        const int m = static_cast<int>(i) + 1;
        std::vector<double> th;
        if (c.majorana_average == "identical") {
            th.assign(static_cast<std::size_t>(n), m * kPi / c.m);
        } else {
            th = random_thetas(c.rng_seed, n, m, c.majorana_average == "binary" ? RandomKind::binary : RandomKind::uniform);
        }
        runs[i] = coherent_checkpoints(n, th, pure_initial(c));
    });
    std::vector<PureState> out;
    for (std::size_t step = 0; step < runs[0].size(); ++step) {
        Vector3c sum = Vector3c::Zero();
        for (const auto& run : runs) sum += run[step].amplitudes();
        out.emplace_back(sum);
    }
    return out;
}

SweepResult run_majorana(const ExperimentConfig& c, int threads) {
    SweepResult r;
    r.csv_name = "majorana.csv";
    r.header = {"step", "mode", "s1x", "s1y", "s1z", "s2x", "s2y", "s2z"};
    const auto thetas = protocol_thetas(c, c.n);
    nlohmann::json finals = nlohmann::json::object();
    for (const auto& mode : c.majorana_modes) {
        std::vector<PureState> states;
        if (mode == "ideal") {
            states = coherent_checkpoints(c.n, thetas, pure_initial(c));
        } else if (mode == "averaged") {
            states = averaged_checkpoints(c, c.n, threads);
        } else {
            ProtocolSpec spec = point_spec(c, c.n, thetas);
            if (spec.model == ModelKind::ideal) {
                ExperimentConfig dc = c;
                dc.model = ModelKind::lindblad_depol;
                spec = point_spec(dc, c.n, thetas);
            }
            for (const auto& rho : dissipative_checkpoints(spec)) states.push_back(rho.dominant_eigenvector());
        }
        const auto traj = star_trajectory(states);
        for (std::size_t step = 0; step < traj.size(); ++step) {
            const auto& t = traj[step];
            r.rows.push_back({std::to_string(step), mode, format_number(t.s1.x()), format_number(t.s1.y()),
                              format_number(t.s1.z()), format_number(t.s2.x()), format_number(t.s2.y()),
                              format_number(t.s2.z())});
        }
        const auto& f = traj.back();
        finals[mode] = {{"s1", {f.s1.x(), f.s1.y(), f.s1.z()}}, {"s2", {f.s2.x(), f.s2.y(), f.s2.z()}}};
    }
    r.aggregates["final_stars"] = finals;
    return r;
}

SweepResult run_projective_compare(const ExperimentConfig& c, int threads) {
    SweepResult r;
    r.csv_name = "compare.csv";
    r.header = {"n",          "p0_coh",   "p2_coh",      "eta_c",       "p_det_proj",
                "p_abs_proj", "eta_proj", "cum_abs_coh", "cum_abs_proj"};
    const auto count = static_cast<std::size_t>(c.n_max - c.n_min + 1);
    std::vector<std::vector<std::string>> rows(count);
    parallel_for(count, threads, [&](std::size_t i) {
        const int n = c.n_min + static_cast<int>(i);
        const std::vector<double> thetas(static_cast<std::size_t>(n), c.theta);
        const ProtocolSpec spec = point_spec(c, n, thetas);
        const OutcomeProbabilities coh = run_protocol(spec);
        std::vector<double> seg;
        if (spec.model == ModelKind::ideal) {
            seg = coherent_segment_absorption(n, thetas);
        } else {
            const auto cps = dissipative_checkpoints(spec);
            for (int j = 1; j <= n; ++j) seg.push_back(cps[static_cast<std::size_t>(2 * j)].population(2));
        }
        const ProjectiveOutcome proj = run_projective(n, thetas);
        rows[i] = {std::to_string(n),
                   format_number(coh.p0),
                   format_number(coh.p2),
                   optional_ratio([&] { return eta_coherent(coh); }),
                   format_number(proj.p_det),
                   format_number(proj.p_abs),
                   optional_ratio([&] { return eta_projective(proj); }),
                   format_number(cumulative_absorption(seg)),
                   format_number(cumulative_absorption(proj.per_segment_abs))};
    });
    r.rows = std::move(rows);
    return r;
}

SweepResult run_coefficients(const ExperimentConfig& c) {
    SweepResult r;
    r.csv_name = "coefficients.csv";
    r.header = {"n", "series", "k", "value"};
    for (int n = c.n_min; n <= c.n_max; ++n) {
        const ExpansionCoefficients ec = expansion_coefficients(n);
        const std::pair<const char*, const std::vector<double>*> series[] = {{"c", &ec.c}, {"cp", &ec.cp}, {"cpp", &ec.cpp}};
        for (const auto& [name, values] : series) {
            for (std::size_t k = 0; k < values->size(); ++k) {
                r.rows.push_back({std::to_string(n), name, std::to_string(k), format_number((*values)[k])});
            }
        }
    }
    return r;
}

SweepResult run_quantized_check(const ExperimentConfig& c) {
    SweepResult r;
    r.csv_name = "quantized.csv";
    r.header = {"n_segments", "n_photons", "theta_rad", "max_marginal_diff", "max_amplitude_diff"};
    double worst = 0.0;
    for (int ns = 1; ns <= c.quantized_segments_max; ++ns) {
        for (int np = 1; np <= c.quantized_photons_max; ++np) {
            const FieldCoupling fc{c.quantized_g, c.quantized_tb};
            const CompositeState s = run_single_mode(ns, np, fc, np + 2);
            const double theta = theta_n(fc.g, np, fc.t_b);
            const std::vector<double> thetas(static_cast<std::size_t>(ns), theta);
            const OutcomeProbabilities p = run_coherent_ideal(ProtocolSpec::identical(ns, theta));
            const auto marg = s.qutrit_marginals();
            double dm = 0.0;
            for (int k = 0; k < 3; ++k) dm = std::max(dm, std::abs(marg[static_cast<std::size_t>(k)] - p[k]));
            const CompositeState g = field_parity_gauge(s);
            const PureState semi = apply_unitary(coherent_sequence_unitary(ns, thetas), PureState::basis(0));
            const double da = std::max({std::abs(g.amplitude({np}, 0) - semi[0]), std::abs(g.amplitude({np}, 1) - semi[1]),
                                        std::abs(g.amplitude({np - 1}, 2) - semi[2])});
            worst = std::max({worst, dm, da});
            r.rows.push_back({std::to_string(ns), std::to_string(np), format_number(theta), format_number(dm),
                              format_number(da)});
        }
    }
    r.aggregates["max_diff"] = worst;
    r.aggregates["tolerance"] = 1e-9;
    r.tolerance_failure = !(worst <= 1e-9);
    return r;
}

}  // namespace

Scenario parse_scenario(const std::string& name) {
    for (const auto& [s, n] : scenario_names()) {
        if (n == name) return s;
    }
    throw ConfigError("unknown scenario: " + name);
}

std::string scenario_name(Scenario s) {
    for (const auto& [sc, n] : scenario_names()) {
        if (sc == s) return n;
    }
    return "";
}

ExperimentConfig parse_config(const std::string& text, Scenario scenario) {
    ExperimentConfig c;
    c.scenario = scenario;
    apply_defaults(c);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (seen.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key " + key);
        seen[key] = lineno;
        set_key(c, key, value);
    }
    validate(c);
    c.echo = make_echo(c);
    return c;
}

ExperimentConfig load_config(const std::string& path, Scenario scenario) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), scenario);
}

std::uint64_t sub_seed(std::uint64_t seed, int n, int m) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(n));
    return splitmix64(h ^ static_cast<std::uint64_t>(m));
}

std::vector<double> random_thetas(std::uint64_t seed, int n, int m, RandomKind kind) {
    std::mt19937_64 rng(sub_seed(seed, n, m));
    std::vector<double> th(static_cast<std::size_t>(n));
    // Raw 53-bit draws keep the stream independent of the library's
    // distribution implementations.
    for (auto& t : th) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        t = kind == RandomKind::uniform ? kPi * u : (u < 0.5 ? 0.0 : kPi);
    }
    return th;
}

DecoherenceModel resolved_decoherence(const ExperimentConfig& c, int n) {
    std::string sample = c.sample;
    if (sample.empty()) {
        switch (c.scenario) {
            case Scenario::n1_sweep:
            case Scenario::n2_map:
                sample = "sample1";
                break;
            case Scenario::histogram:
            case Scenario::majorana_trajectory:
                sample = n <= 2 ? "sample1" : "sample2";
                break;
            default:
                sample = "sample2";
                break;
        }
    }
    DecoherenceModel m = sample == "sample1"   ? DecoherenceModel::sample1()
                         : sample == "sample2" ? DecoherenceModel::sample2()
                                               : DecoherenceModel::closed();
    const double two_pi = 2 * kPi;
    for (const auto& [k, v] : c.decoherence_overrides) {
        if (k == "f01_hz") m.omega01 = two_pi * v;
        if (k == "f12_hz") m.omega12 = two_pi * v;
        if (k == "gamma10_hz") m.gamma10 = v;
        if (k == "gamma21_hz") m.gamma21 = v;
        if (k == "gphi10_hz") m.gphi10 = v;
        if (k == "gphi21_hz") m.gphi21 = v;
        if (k == "gphi02_hz") m.gphi02 = v;
        if (k == "temperature_k") m.temperature = v;
    }
    try {
        m.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid decoherence parameters: ") + e.what());
    }
    return m;
}

ProtocolSpec point_spec(const ExperimentConfig& c, int n, const std::vector<double>& thetas) {
    ProtocolSpec s;
    s.n_segments = n;
    s.thetas = thetas;
    s.model = c.model;
    const bool needs_model = c.model != ModelKind::ideal || c.initial == "thermal";
    std::optional<DecoherenceModel> dm;
    if (needs_model) dm = resolved_decoherence(c, n);
    if (c.model != ModelKind::ideal) {
        s.decoherence = dm;
        PulseGeometry g = PulseGeometry::for_n(n);
        for (const auto& [k, v] : c.pulse_overrides) {
            if (k == "splitter_ns") g.splitter_duration = v * 1e-9;
            if (k == "bpulse_ns") g.bpulse_duration = v * 1e-9;
            if (k == "gap_ns") g.gap = v * 1e-9;
            if (k == "sampling_rate_hz") g.sampling_rate = v;
        }
        s.pulse_geometry = g;
    }
    if (c.initial == "thermal" || (c.initial.empty() && c.model != ModelKind::ideal)) {
        s.initial = thermal_state(*dm);
    } else {
        s.initial = pure_initial(c);
    }
    try {
        s.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid protocol: ") + e.what());
    }
    return s;
}

SweepResult run_scenario(const ExperimentConfig& cfg, int threads) {
    switch (cfg.scenario) {
        case Scenario::n1_sweep:
            return run_n1_sweep(cfg, threads);
        case Scenario::n2_map:
            return run_n2_map(cfg, threads);
        case Scenario::multi_identical:
            return run_multi(cfg, threads, false);
        case Scenario::multi_random:
            return run_multi(cfg, threads, true);
        case Scenario::histogram:
            return run_histogram(cfg);
        case Scenario::majorana_trajectory:
            return run_majorana(cfg, threads);
        case Scenario::projective_compare:
            return run_projective_compare(cfg, threads);
        case Scenario::coefficients:
            return run_coefficients(cfg);
        case Scenario::quantized_check:
            return run_quantized_check(cfg);
    }
    throw ConfigError("unknown scenario");
}

std::string format_number(double x) {
    if (x == 0.0) return "0";  // also folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string to_csv(const SweepResult& r) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(r.header);
    for (const auto& row : r.rows) line(row);
    return out;
}

nlohmann::json summary_json(const ExperimentConfig& cfg, const SweepResult& r) {
    nlohmann::json config = nlohmann::json::object();
    for (const auto& [k, v] : cfg.echo) config[k] = v;
    return {{"scenario", scenario_name(cfg.scenario)},
            {"rng_seed", cfg.rng_seed},
            {"library_version", kLibraryVersion},
            {"config", config},
            {"csv", r.csv_name},
            {"rows", r.rows.size()},
            {"tolerance_failure", r.tolerance_failure},
            {"aggregates", r.aggregates}};
}

void emit(const ExperimentConfig& cfg, const SweepResult& r) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    auto write = [&](const fs::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        f << text;
        if (!f) throw std::runtime_error("write failed for " + p.string());
    };
    write(dir / r.csv_name, to_csv(r));
    write(dir / "summary.json", summary_json(cfg, r).dump(2) + "\n");
}

}  // namespace ifd
