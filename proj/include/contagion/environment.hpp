#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "contagion/config.hpp"
#include "contagion/epidemic.hpp"
#include "contagion/rewards.hpp"
#include "contagion/rng.hpp"

namespace contagion {

/// Agent control: movement (dx, dy) in [-1, 1]^2 and adherence alpha in [0, 1].
struct Action {
    double dx = 0.0;
    double dy = 0.0;
    double alpha = 0.0;

    /// Copy with every component clamped into range; NaN maps to 0.
    Action clamped() const;

    friend bool operator==(const Action&, const Action&) = default;
};

/// Features stored per human in the observation vector.
inline constexpr std::size_t kFeaturesPerHuman = 5;

/// Flat observation: [adherence, then per human in id order
/// (rel_x, rel_y, norm_dist, infected_flag, visible_flag)], length 1 + 5N.
/// Humans outside the visibility radius have all five entries zero.
struct Observation {
    std::vector<double> values;

    std::size_t human_count() const { return (values.size() - 1) / kFeaturesPerHuman; }
    double adherence() const { return values.at(0); }
    std::span<const double> human(std::size_t id) const {
        return std::span<const double>(values).subspan(1 + id * kFeaturesPerHuman,
                                                       kFeaturesPerHuman);
    }
    bool visible(std::size_t id) const { return human(id)[4] != 0.0; }

    friend bool operator==(const Observation&, const Observation&) = default;
};

std::size_t observation_size(int n_humans);
/// Per-element lower and upper bounds of the observation vector.
std::vector<double> observation_low(int n_humans);
std::vector<double> observation_high(int n_humans);

struct StepInfo {
    CompartmentCounts counts;
    double agent_infection_probability = 0.0;
    int new_infections = 0;
    int reinfected = 0;
    int t = 0;

    friend bool operator==(const StepInfo&, const StepInfo&) = default;
};

struct StepOutcome {
    Observation observation;
    double reward = 0.0;
    bool terminated = false;
    bool truncated = false;
    StepInfo info;

    friend bool operator==(const StepOutcome&, const StepOutcome&) = default;
};

struct ResetOutcome {
    Observation observation;
    StepInfo info;
};

/// beta * (eps + (1 - eps)(1 - alpha)).
double effective_beta(double beta, double alpha, double adherence_effectiveness);

/// Moves the agent by scale * (dx, dy) with wrap and sets its adherence to alpha.
/// `action` should already be clamped.
void apply_agent_action(WorldState& world, const Action& action, double movement_scale = 1.0);

/// `visibility_radius` < 0 means everyone is visible.
Observation observe(const WorldState& world, double visibility_radius);

/// Independent random streams for one episode.
struct EpisodeStreams {
    Rng placement;
    Rng human_movement;
    Rng transitions;

    explicit EpisodeStreams(std::uint64_t seed);
};

/// Reset/step driver around one world. Not thread-safe; use one per thread.
class Environment {
public:
    explicit Environment(SimConfig config);

    ResetOutcome reset(std::uint64_t seed);

    /// Advances one step in the fixed order: agent action, human movement, SIRS+D
    /// transitions, reinfection, reward, observation, termination.
    /// Throws ContractViolation if the episode is over or reset() was never called.
    StepOutcome step(const Action& action);

    const SimConfig& config() const { return config_; }
    const WorldState& world() const { return world_; }
    bool done() const { return done_; }
    bool has_episode() const { return started_; }

    /// Steps the agent stayed susceptible: t - 1 if infected at step t, otherwise t.
    int episode_duration() const;
    bool agent_was_infected() const { return agent_infected_; }

private:
    SimConfig config_;
    EpidemicParams params_;
    MovementModel movement_;
    PotentialFieldParams pf_params_;
    WorldState world_;
    EpisodeStreams streams_{0};
    bool started_ = false;
    bool done_ = false;
    bool agent_infected_ = false;
};

}  // namespace contagion
