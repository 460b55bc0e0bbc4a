#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <doctest.h>

#include "ifd/errors.hpp"
#include "ifd/experiment.hpp"
#include "ifd/metrics.hpp"

using namespace ifd;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace

TEST_CASE("config parsing") {
    const auto c = parse_config("# comment\nprotocol.n = 3\nprotocol.theta = 3pi/4 # trailing\n"
                                "model.kind = lindblad_depol\ndecoherence.gamma10_hz = 1e5\n",
                                Scenario::histogram);
    CHECK(c.n == 3);
    CHECK(std::abs(c.theta - 0.75 * kPi) <= 1e-15);
    CHECK(c.model == ModelKind::lindblad_depol);
    CHECK(resolved_decoherence(c, 3).gamma10 == 1e5);
    CHECK(resolved_decoherence(c, 3).gamma21 == DecoherenceModel::sample2().gamma21);

    CHECK(std::abs(parse_config("protocol.theta = pi", Scenario::histogram).theta - kPi) <= 0.0);
    CHECK(std::abs(parse_config("protocol.theta = 0.5*pi", Scenario::histogram).theta - kPi / 2) <= 1e-15);
    CHECK(std::abs(parse_config("protocol.theta = 1.25", Scenario::histogram).theta - 1.25) <= 0.0);
    const auto t = parse_config("protocol.n = 2\nprotocol.thetas = pi, pi/2", Scenario::histogram);
    CHECK(t.thetas.size() == 2);

    CHECK_THROWS_AS(parse_config("protocol.nn = 3", Scenario::histogram), ConfigError);
    CHECK_THROWS_AS(parse_config("decoherence.gamma99_hz = 3", Scenario::histogram), ConfigError);
    CHECK_THROWS_AS(parse_config("protocol.n = three", Scenario::histogram), ConfigError);
    CHECK_THROWS_AS(parse_config("protocol.n = 0", Scenario::histogram), ConfigError);
    CHECK_THROWS_AS(parse_config("protocol.n = 2\nprotocol.n = 3", Scenario::histogram), ConfigError);
    CHECK_THROWS_AS(parse_config("protocol.n = 3\nprotocol.thetas = pi", Scenario::histogram), ConfigError);
    CHECK_THROWS_AS(parse_config("sweep.m = 0", Scenario::multi_identical), ConfigError);
    CHECK_THROWS_AS(parse_config("just text", Scenario::histogram), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = n2_map", Scenario::n1_sweep), ConfigError);
    CHECK_THROWS_AS(parse_config("protocol.n = 2", Scenario::n1_sweep), ConfigError);
    CHECK_THROWS_AS(parse_scenario("n3_map"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.conf", Scenario::n1_sweep), ConfigError);
    CHECK(parse_scenario("majorana_trajectory") == Scenario::majorana_trajectory);
}

TEST_CASE("sub-seed derivation") {
    CHECK(sub_seed(11, 25, 3) == mix(mix(mix(11) ^ 25ULL) ^ 3ULL));
    CHECK(sub_seed(11, 25, 3) != sub_seed(11, 25, 4));
    CHECK(sub_seed(11, 25, 3) != sub_seed(11, 24, 3));
    const auto a = random_thetas(5, 10, 7, RandomKind::uniform);
    CHECK(a == random_thetas(5, 10, 7, RandomKind::uniform));
    for (double x : a) {
        CHECK(x >= 0.0);
        CHECK(x <= kPi);
    }
    for (double x : random_thetas(5, 25, 1, RandomKind::binary)) CHECK((x == 0.0 || x == kPi));
}

TEST_CASE("n1_sweep rows") {
    const auto c = parse_config("sweep.points = 181", Scenario::n1_sweep);
    const SweepResult r = run_scenario(c);
    CHECK(r.rows.size() == 181);
    CHECK(r.header == std::vector<std::string>{"theta_rad", "p0", "p1", "p2", "pr", "nr", "eta_c"});
    // theta = 0: p0 = p2 = 0 so eta_c is undefined and left empty.
    CHECK(r.rows[0][6].empty());
    const auto& last = r.rows.back();
    CHECK(std::stod(last[0]) == doctest::Approx(4 * kPi));
    for (const auto& row : r.rows) {
        const double th = std::stod(row[0]);
        CHECK(std::abs(std::stod(row[1]) - std::pow(std::sin(th / 4), 4)) <= 1e-10);
    }
}

TEST_CASE("multi_identical and histogram examples") {
    const auto c = parse_config("sweep.n_min = 25\nsweep.n_max = 25\nsweep.m = 180", Scenario::multi_identical);
    const SweepResult r = run_scenario(c, 3);
    REQUIRE(r.rows.size() == 180);
    CHECK(r.rows.back()[1] == "180");
    CHECK(std::stod(r.rows.back()[3]) >= 0.95);

    const auto h = parse_config("protocol.n = 1\nprotocol.theta = 0\nsweep.shots = 10000", Scenario::histogram);
    const SweepResult hr = run_scenario(h);
    REQUIRE(hr.rows.size() == 3);
    CHECK(hr.rows[1][0] == "D1");
    CHECK(hr.rows[1][1] == "10000");
    CHECK(std::stod(hr.rows[1][2]) == 1.0);
}

TEST_CASE("grid coverage and thread independence") {
    const auto c = parse_config("sweep.n_min = 2\nsweep.n_max = 6\nsweep.m = 13\nrng_seed = 99\n"
                                "model.kind = lindblad_depol",
                                Scenario::multi_random);
    const SweepResult one = run_scenario(c, 1);
    const SweepResult four = run_scenario(c, 4);
    CHECK(to_csv(one) == to_csv(four));
    CHECK(summary_json(c, one).dump() == summary_json(c, four).dump());
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& row : one.rows) seen.insert({row[0], row[1]});
    CHECK(seen.size() == 5 * 13);
    CHECK(one.rows.size() == 5 * 13);

    const auto other = parse_config("sweep.n_min = 2\nsweep.n_max = 6\nsweep.m = 13\nrng_seed = 100\n"
                                    "model.kind = lindblad_depol",
                                    Scenario::multi_random);
    CHECK(to_csv(run_scenario(other, 2)) != to_csv(one));
}

TEST_CASE("summary aggregates match the CSV") {
    const auto c = parse_config("sweep.n_min = 3\nsweep.n_max = 4\nsweep.m = 20\nrng_seed = 4", Scenario::multi_random);
    const SweepResult r = run_scenario(c);
    const auto rows = parse_csv(to_csv(r));
    const nlohmann::json s = summary_json(c, r);
    CHECK(s["scenario"] == "multi_random");
    CHECK(s["rng_seed"] == 4);
    CHECK(s["config"]["sweep.m"] == "20");
    for (const auto& entry : s["aggregates"]["per_n"]) {
        std::vector<double> p0;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (std::stoi(rows[i][0]) == entry["n"].get<int>()) p0.push_back(std::stod(rows[i][3]));
        }
        REQUIRE(p0.size() == 20);
        const auto st = distribution_stats(p0);
        CHECK(entry["mean_p0"].get<double>() == st.mean);
        CHECK(entry["std_p0"].get<double>() == st.std);
        CHECK(entry["min_p0"].get<double>() == *std::min_element(p0.begin(), p0.end()));
    }
    // Random theta lists round-trip through the CSV.
    std::vector<double> th;
    std::istringstream spec(rows[1][2]);
    std::string item;
    while (std::getline(spec, item, ';')) th.push_back(std::stod(item));
    CHECK(th == random_thetas(4, 3, 1, RandomKind::uniform));
}

TEST_CASE("emitters") {
    SweepResult empty;
    empty.csv_name = "n1_sweep.csv";
    empty.header = {"theta_rad", "p0"};
    CHECK(to_csv(empty) == "theta_rad,p0\n");
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(-0.0) == "0");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("other scenarios") {
    const SweepResult co = run_scenario(parse_config("", Scenario::coefficients));
    CHECK(co.rows.front() == std::vector<std::string>{"1", "c", "0", co.rows.front()[3]});

    const SweepResult q = run_scenario(parse_config("", Scenario::quantized_check));
    CHECK(q.rows.size() == 20);
    CHECK_FALSE(q.tolerance_failure);

    const SweepResult m = run_scenario(
        parse_config("protocol.n = 2\nsweep.m = 10\nmodel.kind = lindblad", Scenario::majorana_trajectory));
    CHECK(m.rows.size() == 3 * 6);
    CHECK(m.rows[0][1] == "ideal");
    CHECK(m.rows[6][1] == "averaged");
    CHECK(m.rows[12][1] == "dissipative");

    const SweepResult pc = run_scenario(parse_config("sweep.n_min = 1\nsweep.n_max = 3", Scenario::projective_compare), 2);
    REQUIRE(pc.rows.size() == 3);
    CHECK(std::abs(std::stod(pc.rows[0][7]) - 0.5) <= 1e-12);
    CHECK(std::abs(std::stod(pc.rows[0][8]) - 0.5) <= 1e-12);
}
