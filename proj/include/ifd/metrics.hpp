#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ifd/protocol.hpp"

namespace ifd {

struct ConfusionMatrix {
    double tpr = 0.0;
    double fnr = 0.0;
    double fpr = 0.0;
    double tnr = 0.0;
};

struct ShotCounts {
    std::int64_t d0 = 0;
    std::int64_t d1 = 0;
    std::int64_t d2 = 0;
    std::int64_t total = 0;

    std::int64_t operator[](int k) const { return k == 0 ? d0 : (k == 1 ? d1 : d2); }
};

struct DistributionStats {
    double mean = 0.0;
    double std = 0.0;  // population
};

// (PR, NR) = (p0, p1) / (p0 + p1). UndefinedRatioError when p0 + p1 <= 1e-15.
std::pair<double, double> pr_nr(const OutcomeProbabilities& p);

ConfusionMatrix confusion_matrix(const OutcomeProbabilities& at_pi, const OutcomeProbabilities& at_zero);

// p_success / (p_success + p_absorb); same 1e-15 floor on the denominator.
double efficiency(double p_success, double p_absorb);
double eta_coherent(const OutcomeProbabilities& p);
double eta_projective(const ProjectiveOutcome& p);

double cumulative_absorption(const std::vector<double>& per_segment);

// Trapezoidal integral of p0 over an ascending theta grid.
double plateau_area(const std::vector<double>& theta_grid, const std::vector<double>& p0_values);

DistributionStats distribution_stats(const std::vector<double>& values);

// Multinomial draw from a mt19937_64 seeded with `seed`.
ShotCounts sample_shots(const OutcomeProbabilities& p, std::int64_t n_shots, std::uint64_t seed);

// Counts per microsecond for a sensing time in seconds.
double dark_count_rate(double fpr, double sensing_time);

}  // namespace ifd
