#include "contagion/environment.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "contagion/errors.hpp"
#include "contagion/movement.hpp"

namespace contagion {

namespace {

double clamp_finite(double v, double lo, double hi) {
    return std::isnan(v) ? 0.0 : std::clamp(v, lo, hi);
}

StepInfo make_info(const WorldState& world) {
    StepInfo info;
    info.counts = count_humans(world);
    info.t = world.t;
    return info;
}

}  // namespace

Action Action::clamped() const {
    return {clamp_finite(dx, -1.0, 1.0), clamp_finite(dy, -1.0, 1.0), clamp_finite(alpha, 0.0, 1.0)};
}

std::size_t observation_size(int n_humans) {
    return 1 + kFeaturesPerHuman * static_cast<std::size_t>(std::max(n_humans, 0));
}

std::vector<double> observation_low(int n_humans) {
    std::vector<double> low(observation_size(n_humans), 0.0);
    for (std::size_t k = 1; k < low.size(); k += kFeaturesPerHuman) {
        low[k] = -0.5;
        low[k + 1] = -0.5;
    }
    return low;
}

std::vector<double> observation_high(int n_humans) {
    std::vector<double> high(observation_size(n_humans), 1.0);
    for (std::size_t k = 1; k < high.size(); k += kFeaturesPerHuman) {
        high[k] = 0.5;
        high[k + 1] = 0.5;
    }
    return high;
}

double effective_beta(double beta, double alpha, double eps) {
    return beta * (eps + (1.0 - eps) * (1.0 - alpha));
}

void apply_agent_action(WorldState& world, const Action& action, double movement_scale) {
    auto& a = world.agent;
    a.position = wrap({a.position.x + movement_scale * action.dx,
                       a.position.y + movement_scale * action.dy},
                      world.grid_size);
    a.adherence = action.alpha;
}

Observation observe(const WorldState& world, double visibility_radius) {
    const double g = world.grid_size;
    const double d_max = max_grid_distance(g);
    Observation obs;
    obs.values.assign(1 + kFeaturesPerHuman * world.humans.size(), 0.0);
    obs.values[0] = world.agent.adherence;
    for (std::size_t k = 0; k < world.humans.size(); ++k) {
        const auto& h = world.humans[k];
        const Displacement rel = wrapped_delta(world.agent.position, h.position, g);
        const double d = rel.norm();
        if (visibility_radius >= 0.0 && d > visibility_radius) {
            continue;
        }
        double* f = obs.values.data() + 1 + k * kFeaturesPerHuman;
        f[0] = rel.dx / g;
        f[1] = rel.dy / g;
        f[2] = std::min(d / d_max, 1.0);
        f[3] = h.compartment == Compartment::I ? 1.0 : 0.0;
        f[4] = 1.0;
    }
    return obs;
}

EpisodeStreams::EpisodeStreams(std::uint64_t seed)
    : placement(seed, Stream::placement),
      human_movement(seed, Stream::human_movement),
      transitions(seed, Stream::transitions) {}

Environment::Environment(SimConfig config)
    : config_(std::move(config)),
      params_(epidemic_params(config_)),
      movement_(movement_model(config_)) {
    validate(config_);
}

ResetOutcome Environment::reset(std::uint64_t seed) {
    streams_ = EpisodeStreams(seed);
    world_ = initialize(config_, streams_.placement);
    started_ = true;
    done_ = false;
    agent_infected_ = false;
    return {observe(world_, config_.visibility_radius), make_info(world_)};
}

StepOutcome Environment::step(const Action& raw_action) {
    if (!started_) {
        throw ContractViolation("step() called before reset()");
    }
    if (done_) {
        throw ContractViolation("step() called on a finished episode; call reset()");
    }
    // An infected agent ends the episode, so it never acts as an infection source.
    assert(world_.agent.compartment == Compartment::S);

    const Action action = raw_action.clamped();
    apply_agent_action(world_, action);
    move_humans(world_, movement_, streams_.human_movement);

    const double agent_beta =
        effective_beta(params_.beta, world_.agent.adherence, config_.adherence_effectiveness);
    const TransitionReport tr = step_compartments(world_, params_, agent_beta, streams_.transitions);
    int reinfected = 0;
    const bool reinfection_ok = reinfect_if_extinct(world_, params_, streams_.transitions, &reinfected);
    world_.t += 1;

    StepOutcome out;
    const RewardContext ctx{world_, {action.dx, action.dy}, tr.agent_infection_probability,
                            config_.max_infection_distance};
    out.reward = compute_reward(config_.reward_function_type, config_.reward_ablation, ctx, pf_params_);
    out.observation = observe(world_, config_.visibility_radius);

    agent_infected_ = tr.agent_infected;
    out.terminated = tr.agent_infected || !reinfection_ok;
    out.truncated = !out.terminated && world_.t >= config_.simulation_time;
    done_ = out.terminated || out.truncated;

    out.info = make_info(world_);
    out.info.agent_infection_probability = tr.agent_infection_probability;
    out.info.new_infections = tr.new_infections;
    out.info.reinfected = reinfected;
    return out;
}

int Environment::episode_duration() const {
    return agent_infected_ ? world_.t - 1 : world_.t;
}

}  // namespace contagion
