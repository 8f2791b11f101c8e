#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "contagion/baselines.hpp"
#include "contagion/config.hpp"
#include "contagion/stats.hpp"

namespace contagion {

/// One line of an episode log.
struct EpisodeRow {
    std::uint64_t seed = 0;
    int episode = 0;
    int duration = 0;
    bool truncated = false;
    double cumulative_reward = 0.0;
    int total_infections = 0;
    double infections_per_step = 0.0;

    friend bool operator==(const EpisodeRow&, const EpisodeRow&) = default;
};

inline constexpr std::string_view kEpisodeCsvHeader =
    "seed,episode_idx,duration,truncated,cumulative_reward,total_infections,infections_per_step";

/// Doubles are written in shortest round-trip form, so parse_row(serialize_row(r)) == r.
std::string serialize_row(const EpisodeRow& row);
EpisodeRow parse_row(std::string_view line);

std::vector<EpisodeRow> read_episode_csv(const std::filesystem::path& path);

/// Called after every step with the world and the step index (1-based).
using FrameSink = std::function<void(const WorldState&, int)>;

struct EpisodeResult {
    EpisodeRecord record;
    EpisodeSummary summary;
};

/// Plays one episode of `policy` with the given episode seed.
EpisodeResult run_episode(Environment& env, Policy& policy, std::uint64_t episode_seed,
                          const FrameSink& on_frame = {});

/// Per-step JSON lines for a finished episode.
std::string trace_jsonl(const EpisodeRecord& record, std::uint64_t seed, int episode);

struct ExperimentManifest {
    SimConfig config;
    /// stationary | random | greedy | replay:<file>
    std::string policy = "stationary";
    std::filesystem::path out_dir;
    bool trace = false;
    bool render = false;
    unsigned threads = 1;
};

/// Output file stem for a policy spec, e.g. "greedy".
std::string output_stem(const ExperimentManifest& manifest);

/// Runs seeds x episodes. Rows come back ordered by (seed position, episode). When
/// out_dir is set, writes <stem>.episodes.csv incrementally in that order (so rows
/// finished before an I/O failure stay on disk), <stem>.config, and optionally
/// <stem>.trace.jsonl and frames/.
std::vector<EpisodeRow> run_experiment(const ExperimentManifest& manifest);

struct PolicySummary {
    std::string policy;
    std::size_t episodes = 0;
    double mean_duration = 0.0;
    std::vector<double> seed_means;
    ConfidenceInterval ci;
    double mean_infections_per_step = 0.0;
};

struct Report {
    std::vector<PolicySummary> policies;
    std::vector<TestResult> comparisons;
};

/// Index of `policy` in the report order: stationary, random, greedy, then the rest
/// alphabetically.
int policy_rank(const std::string& policy);

/// Duration samples of each policy grouped by seed. Order follows policy_rank.
Report build_report(const std::map<std::string, SampleSet>& durations,
                    const std::map<std::string, double>& infections_per_step,
                    const std::vector<std::pair<std::string, std::string>>& pairs = {});

/// "all" or a list like "stationary:greedy,random:greedy".
std::vector<std::pair<std::string, std::string>> parse_pairs(std::string_view spec,
                                                            const std::vector<std::string>& policies);

/// Reads every *.episodes.csv in `dir`.
Report report_from_dir(const std::filesystem::path& dir, std::string_view pairs = "all");

inline constexpr std::string_view kComparisonCsvHeader =
    "Agent A,Agent B,p (2-sided),p (1-sided),Sig (2),Corrected p (1),Sig (1),Winner";

std::string comparisons_csv(const Report& report);
std::string summary_csv(const Report& report);
std::string report_text(const Report& report);

}  // namespace contagion
