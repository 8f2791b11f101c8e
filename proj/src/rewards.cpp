#include "contagion/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "contagion/errors.hpp"

namespace contagion {

std::string_view to_string(RewardKind k) {
    switch (k) {
        case RewardKind::constant: return "constant";
        case RewardKind::reduce_infection: return "reduce_infection";
        case RewardKind::combined: return "combined";
        case RewardKind::max_nearest_distance: return "max_nearest_distance";
        case RewardKind::potential_field: return "potential_field";
    }
    return "?";
}

std::string_view to_string(RewardAblation a) {
    switch (a) {
        case RewardAblation::full: return "full";
        case RewardAblation::no_magnitude: return "no_magnitude";
        case RewardAblation::no_direction: return "no_direction";
        case RewardAblation::no_movement: return "no_movement";
        case RewardAblation::no_adherence: return "no_adherence";
        case RewardAblation::no_health: return "no_health";
        case RewardAblation::no_susceptible_repulsion: return "no_susceptible_repulsion";
    }
    return "?";
}

double constant_reward(Compartment agent) { return agent == Compartment::S ? 1.0 : 0.0; }

double reduce_infection_reward(double p_inf, Compartment agent) {
    if (agent != Compartment::S) {
        return -5.0;
    }
    const double q = 1.0 - p_inf;
    return q * q;
}

double combined_reward(double p_inf, Compartment agent) {
    if (agent != Compartment::S) {
        return 0.0;
    }
    const double q = 1.0 - p_inf;
    return 0.8 * q * q + 0.1;
}

double max_nearest_distance_reward(std::optional<double> d_min, double d_beta, Compartment agent) {
    if (agent == Compartment::I) {
        return 0.0;
    }
    if (!d_min) {
        return 1.0;
    }
    if (!(d_beta > 0.0)) {
        throw ConfigError("max_nearest_distance reward needs max_infection_distance > 0");
    }
    if (*d_min >= d_beta) {
        return 1.0;
    }
    return std::max(0.0, *d_min / d_beta);
}

std::optional<double> nearest_relevant_distance(const WorldState& world) {
    std::optional<double> best;
    for (const auto& h : world.humans) {
        if (h.compartment != Compartment::S && h.compartment != Compartment::I) {
            continue;
        }
        const double d = toroidal_distance(world.agent.position, h.position, world.grid_size);
        if (!best || d < *best) {
            best = d;
        }
    }
    return best;
}

ForceVector potential_force(Position agent, std::span<const Individual> humans,
                            const PotentialFieldParams& params, double grid_size,
                            RewardAblation ablation) {
    const double w_s =
        ablation == RewardAblation::no_susceptible_repulsion ? 0.0 : params.weight_susceptible;
    ForceVector f;
    for (const auto& h : humans) {
        double weight = 0.0;
        if (h.compartment == Compartment::I) {
            weight = params.weight_infected;
        } else if (h.compartment == Compartment::S) {
            weight = w_s;
        }
        if (weight == 0.0) {
            continue;
        }
        // Points from the human to the agent, so the force is repulsive.
        const Displacement dp = wrapped_delta(h.position, agent, grid_size);
        const double d2 = dp.dx * dp.dx + dp.dy * dp.dy + params.eps_dist;
        const double scale = weight / std::pow(d2, params.force_exponent / 2.0);
        f.fx += scale * dp.dx;
        f.fy += scale * dp.dy;
    }
    return f;
}

PotentialFieldTerms potential_field_terms(ForceVector force, Displacement move, Compartment agent,
                                          double alpha, const PotentialFieldParams& params,
                                          RewardAblation ablation) {
    PotentialFieldTerms t;

    // Norms are floored at eps_norm: a zero vector yields zero alignment, and an
    // exactly aligned action scores 1.
    const double f_norm = force.norm();
    const double f_div = std::max(f_norm, params.eps_norm);
    const double fhat_x = force.fx / f_div;
    const double fhat_y = force.fy / f_div;
    const double a_norm = move.norm();
    const double a_div = std::max(a_norm, params.eps_norm);
    t.r_dir = std::clamp((move.dx * fhat_x + move.dy * fhat_y) / a_div, -1.0, 1.0);
    t.r_mag = std::clamp(1.0 - std::abs(a_norm - std::min(f_norm, 1.0)), -1.0, 1.0);

    switch (ablation) {
        case RewardAblation::no_magnitude: t.r_move = t.r_dir; break;
        case RewardAblation::no_direction: t.r_move = t.r_mag; break;
        case RewardAblation::no_movement: t.r_move = 0.0; break;
        default:
            t.r_move = (1.0 - params.magnitude_blend) * t.r_dir + params.magnitude_blend * t.r_mag;
            break;
    }
    t.r_health = ablation == RewardAblation::no_health ? 0.0 : constant_reward(agent);
    t.r_adherence = ablation == RewardAblation::no_adherence ? 0.0 : alpha;
    t.total = params.w_health * t.r_health + params.w_adherence * t.r_adherence +
              params.w_movement * t.r_move;
    return t;
}

double potential_field_reward(ForceVector force, Displacement move, Compartment agent,
                              double alpha, const PotentialFieldParams& params,
                              RewardAblation ablation) {
    return potential_field_terms(force, move, agent, alpha, params, ablation).total;
}

double compute_reward(RewardKind kind, RewardAblation ablation, const RewardContext& ctx,
                      const PotentialFieldParams& params) {
    const Compartment agent = ctx.world.agent.compartment;
    switch (kind) {
        case RewardKind::constant: return constant_reward(agent);
        case RewardKind::reduce_infection:
            return reduce_infection_reward(ctx.agent_infection_probability, agent);
        case RewardKind::combined: return combined_reward(ctx.agent_infection_probability, agent);
        case RewardKind::max_nearest_distance:
            return max_nearest_distance_reward(nearest_relevant_distance(ctx.world),
                                               ctx.max_infection_distance, agent);
        case RewardKind::potential_field: {
            const ForceVector f = potential_force(ctx.world.agent.position, ctx.world.humans,
                                                  params, ctx.world.grid_size, ablation);
            return potential_field_reward(f, ctx.move, agent, ctx.world.agent.adherence, params,
                                          ablation);
        }
    }
    return 0.0;
}

}  // namespace contagion
