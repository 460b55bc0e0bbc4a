#include "ifd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ifd/errors.hpp"

namespace ifd {

namespace {
// Denominators at round-off level carry no information.
constexpr double kRatioFloor = 1e-15;
}  // namespace

std::pair<double, double> pr_nr(const OutcomeProbabilities& p) {
    const double denom = p.p0 + p.p1;
    if (!(denom > kRatioFloor)) throw UndefinedRatioError("PR/NR undefined: p0 + p1 = 0");
    const double pr = p.p0 / denom;
    return {pr, 1.0 - pr};
}

ConfusionMatrix confusion_matrix(const OutcomeProbabilities& at_pi, const OutcomeProbabilities& at_zero) {
    const auto [tpr, fnr] = pr_nr(at_pi);
    const auto [fpr, tnr] = pr_nr(at_zero);
    return {tpr, fnr, fpr, tnr};
}

double efficiency(double p_success, double p_absorb) {
    const double denom = p_success + p_absorb;
    if (!(denom > kRatioFloor)) throw UndefinedRatioError("efficiency undefined: zero denominator");
    return p_success / denom;
}

double eta_coherent(const OutcomeProbabilities& p) { return efficiency(p.p0, p.p2); }

double eta_projective(const ProjectiveOutcome& p) { return efficiency(p.p_det, p.p_abs); }

double cumulative_absorption(const std::vector<double>& per_segment) {
    double sum = 0.0;
    for (double p : per_segment) {
        if (!(p >= 0.0 && p <= 1.0 + 1e-12)) throw DomainError("absorption probabilities must lie in [0, 1]");
        sum += p;
    }
    return sum;
}

double plateau_area(const std::vector<double>& theta_grid, const std::vector<double>& p0_values) {
    if (theta_grid.size() != p0_values.size()) throw DomainError("theta grid and p0 values differ in length");
    double area = 0.0;
    for (std::size_t i = 1; i < theta_grid.size(); ++i) {
        const double h = theta_grid[i] - theta_grid[i - 1];
        if (!(h >= 0.0)) throw DomainError("theta grid must be ascending");
        area += 0.5 * h * (p0_values[i] + p0_values[i - 1]);
    }
    return area;
}

DistributionStats distribution_stats(const std::vector<double>& values) {
    if (values.empty()) throw DomainError("distribution_stats needs at least one value");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return {mean, std::sqrt(var / n)};
}

ShotCounts sample_shots(const OutcomeProbabilities& p, std::int64_t n_shots, std::uint64_t seed) {
    if (n_shots < 1) throw DomainError("n_shots must be at least 1");
    for (int k = 0; k < 3; ++k) {
        if (!(p[k] >= -1e-12 && p[k] <= 1.0 + 1e-12)) throw DomainError("outcome probabilities must lie in [0, 1]");
    }
    const double total = p.p0 + p.p1 + p.p2;
    if (!(std::abs(total - 1.0) <= 1e-6)) throw DomainError("outcome probabilities must sum to 1");

    std::mt19937_64 rng(seed);
    const double q0 = std::clamp(p.p0 / total, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> first(n_shots, q0);
    ShotCounts c;
    c.total = n_shots;
    c.d0 = first(rng);
    const std::int64_t rest = n_shots - c.d0;
    const double tail = std::max(p.p1, 0.0) + std::max(p.p2, 0.0);
    const double q1 = tail > 0.0 ? std::clamp(std::max(p.p1, 0.0) / tail, 0.0, 1.0) : 0.0;
    if (rest > 0 && tail > 0.0) {
        std::binomial_distribution<std::int64_t> second(rest, q1);
        c.d1 = second(rng);
    } else {
        c.d1 = 0;
    }
    c.d2 = rest - c.d1;
    return c;
}

double dark_count_rate(double fpr, double sensing_time) {
    if (!(sensing_time > 0.0)) throw DomainError("sensing time must be positive");
    return fpr / (sensing_time * 1e6);
}

}  // namespace ifd
