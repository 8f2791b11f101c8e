#pragma once

#include <optional>
#include <string_view>

#include "contagion/epidemic.hpp"
#include "contagion/geometry.hpp"

namespace contagion {

enum class RewardKind { constant, reduce_infection, combined, max_nearest_distance, potential_field };

enum class RewardAblation {
    full,
    no_magnitude,
    no_direction,
    no_movement,
    no_adherence,
    no_health,
    no_susceptible_repulsion,
};

std::string_view to_string(RewardKind k);
std::string_view to_string(RewardAblation a);

struct PotentialFieldParams {
    double w_health = 0.1;
    double w_adherence = 0.2;
    double w_movement = 0.7;
    double weight_infected = 1.0;
    double weight_susceptible = 0.5;
    double force_exponent = 1.0;
    /// Share of r_mag in the movement term.
    double magnitude_blend = 0.25;
    double eps_dist = 1e-8;
    double eps_norm = 1e-8;
};

struct ForceVector {
    double fx = 0.0;
    double fy = 0.0;

    double norm() const { return std::hypot(fx, fy); }
};

/// 1 while the agent is susceptible, else 0.
double constant_reward(Compartment agent);

/// (1 - p)^2 while susceptible, -5 otherwise.
double reduce_infection_reward(double p_inf, Compartment agent);

/// 0.8 (1 - p)^2 + 0.1 while susceptible, 0 otherwise.
double combined_reward(double p_inf, Compartment agent);

/// `d_min` is the distance to the nearest S or I human, or nullopt when there is none.
/// Throws ConfigError if `d_beta` <= 0 while such a human exists.
double max_nearest_distance_reward(std::optional<double> d_min, double d_beta, Compartment agent);

/// Distance from the agent to the nearest human in S or I.
std::optional<double> nearest_relevant_distance(const WorldState& world);

/// Net repulsive force on the agent: sum over humans of
/// weight_j / (d_j^2 + eps_dist)^(p/2) * (agent - human_j), using the wrapped displacement.
/// I humans weigh W_I, S humans W_S (0 under no_susceptible_repulsion), others 0.
ForceVector potential_force(Position agent, std::span<const Individual> humans,
                            const PotentialFieldParams& params, double grid_size,
                            RewardAblation ablation = RewardAblation::full);

/// Breakdown of the potential-field reward; `total` is the weighted sum.
struct PotentialFieldTerms {
    double r_dir = 0.0;
    double r_mag = 0.0;
    double r_move = 0.0;
    double r_health = 0.0;
    double r_adherence = 0.0;
    double total = 0.0;
};

/// `move` is the (dx, dy) part of the action applied this step and `alpha` the
/// adherence it set.
PotentialFieldTerms potential_field_terms(ForceVector force, Displacement move, Compartment agent,
                                          double alpha, const PotentialFieldParams& params,
                                          RewardAblation ablation);

double potential_field_reward(ForceVector force, Displacement move, Compartment agent,
                              double alpha, const PotentialFieldParams& params,
                              RewardAblation ablation);

/// Everything a reward needs about the step that just happened.
struct RewardContext {
    const WorldState& world;  ///< post-transition state
    Displacement move;        ///< clamped (dx, dy) applied this step
    double agent_infection_probability = 0.0;
    double max_infection_distance = 10.0;
};

/// Dispatches to the configured reward.
double compute_reward(RewardKind kind, RewardAblation ablation, const RewardContext& ctx,
                      const PotentialFieldParams& params = {});

}  // namespace contagion
