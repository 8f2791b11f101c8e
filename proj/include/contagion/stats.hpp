#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "contagion/environment.hpp"

namespace contagion {

/// Observations grouped by seed.
struct SampleSet {
    std::vector<std::vector<double>> by_seed;

    std::vector<double> pooled() const;
    std::vector<double> seed_means() const;
    double mean() const;
    std::size_t size() const;
};

enum class Alternative {
    two_sided,
    greater,  ///< first sample tends to be larger
    less,
};

struct MannWhitneyResult {
    /// U of the first sample: pairs with a > b plus half the ties.
    double u_a = 0.0;
    double u_b = 0.0;
    double p_two_sided = 1.0;
    double p_greater = 1.0;
    double p_less = 1.0;
    bool exact = false;
    /// Every pooled value identical; all p-values are 1.
    bool degenerate = false;

    double p(Alternative alt) const;
};

/// Largest side for which the exact null distribution is always used.
inline constexpr std::size_t kExactSideLimit = 8;
/// Pooled size above which the normal approximation is used regardless.
inline constexpr std::size_t kExactPooledLimit = 1000;

/// Mann-Whitney U with midranks for ties. The exact permutation distribution is used
/// when either side has at most kExactSideLimit values (pooled size permitting);
/// otherwise a normal approximation with tie-corrected variance and continuity
/// correction. Throws std::invalid_argument on an empty sample.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// min(1, p * m). Throws std::invalid_argument when m < 1.
double bonferroni(double p, std::size_t comparisons);

/// "***", "**", "*" or "n.s." at the 0.001 / 0.01 / 0.05 thresholds.
std::string_view significance_code(double p);

/// One row of a pairwise comparison table.
struct TestResult {
    std::string agent_a;
    std::string agent_b;
    double u_statistic = 0.0;
    double p_two_sided = 1.0;
    /// One-sided p in the direction of the agent with the larger mean.
    double p_one_sided = 1.0;
    double p_one_sided_corrected = 1.0;
    /// Agent with the larger mean when the corrected one-sided p is below alpha.
    std::optional<std::string> winner;
    bool degenerate = false;
};

TestResult compare_samples(std::string agent_a, std::span<const double> a, std::string agent_b,
                           std::span<const double> b, std::size_t comparisons,
                           double alpha = 0.05);

struct ConfidenceInterval {
    double point = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

/// Linear-interpolation quantile of already sorted data, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

/// Percentile bootstrap of the mean of `per_seed_means`.
ConfidenceInterval bootstrap_ci(std::span<const double> per_seed_means, std::size_t n_resamples,
                                double level, std::uint64_t seed = 0);

inline constexpr std::size_t kBootstrapResamples = 10000;
inline constexpr double kConfidenceLevel = 0.95;

struct StepRecord {
    Action action;
    double reward = 0.0;
    CompartmentCounts counts;
    double agent_infection_probability = 0.0;
    int new_infections = 0;
    int reinfected = 0;
};

struct EpisodeRecord {
    std::vector<StepRecord> steps;
    bool agent_infected = false;
    bool truncated = false;
};

struct EpisodeSummary {
    int length = 0;
    int duration = 0;
    bool truncated = false;
    double cumulative_reward = 0.0;
    int total_infections = 0;
    double infections_per_step = 0.0;
};

/// Duration is length - 1 when the agent was infected on the last step, else the
/// length. Infections count S->I transmissions among humans.
EpisodeSummary episode_metrics(const EpisodeRecord& record);

}  // namespace contagion
