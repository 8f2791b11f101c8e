#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contagion/environment.hpp"
#include "contagion/rng.hpp"

namespace contagion {

/// Always (0, 0, 0).
Action stationary_action();

/// dx, dy ~ U(-1, 1), alpha ~ U(0, 1).
Action random_action(Rng& rng);

/// Candidate moves in tie-break order: stay, E, W, N, S, NE, NW, SE, SW.
std::array<Displacement, 9> greedy_candidates(double movement_scale);

/// Index of the infected human nearest the agent; lowest id wins ties.
std::optional<std::size_t> nearest_infected(const WorldState& world);

/// Move among greedy_candidates that maximizes the distance from the nearest
/// infected human's current position, with alpha = 1. The action carries the
/// displacement itself, which the agent applies at unit scale. Stays put when nobody is infected.
Action greedy_action(const WorldState& world, double movement_scale);

enum class PolicyKind { stationary, random, greedy, replay };

/// Stateful per-episode policy. `reset` is called with the episode seed before the
/// first `act`.
class Policy {
public:
    virtual ~Policy() = default;
    virtual void reset(std::uint64_t episode_seed) = 0;
    virtual Action act(const WorldState& world) = 0;
    virtual PolicyKind kind() const = 0;
};

/// Reads actions, one "dx dy alpha" triple per line (commas or spaces; '#' comments).
std::vector<Action> parse_actions(std::string_view text);
std::vector<Action> load_actions(const std::string& path);

/// `spec` is stationary, random, greedy, or replay:<actions-file>. A replay policy
/// restarts its sequence every episode and falls back to the stationary action once
/// the sequence is exhausted.
std::unique_ptr<Policy> make_policy(std::string_view spec, const SimConfig& config);

/// Short label for reports: "stationary", "random", "greedy", or "replay".
std::string policy_label(std::string_view spec);

}  // namespace contagion
