#include "contagion/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "contagion/config.hpp"
#include "contagion/errors.hpp"

namespace contagion {

std::string_view to_string(Compartment c) {
    switch (c) {
        case Compartment::S: return "S";
        case Compartment::I: return "I";
        case Compartment::R: return "R";
        case Compartment::D: return "D";
    }
    return "?";
}

CompartmentCounts count_humans(const WorldState& world) {
    CompartmentCounts c;
    for (const auto& h : world.humans) {
        switch (h.compartment) {
            case Compartment::S: ++c.s; break;
            case Compartment::I: ++c.i; break;
            case Compartment::R: ++c.r; break;
            case Compartment::D: ++c.d; break;
        }
    }
    return c;
}

double exposure(Position pos, std::span<const Position> infected, double distance_decay,
                double max_dist, double grid_size) {
    double sum = 0.0;
    for (const Position& p : infected) {
        const double d = toroidal_distance(pos, p, grid_size);
        if (max_dist < 0.0 || d <= max_dist) {
            sum += std::exp(-distance_decay * d);
        }
    }
    return sum;
}

double infection_probability(double exposure, double beta) {
    // -expm1 keeps precision for small rates and stays below 1 for finite input.
    return -std::expm1(-beta * exposure);
}

std::vector<Position> infected_positions(const WorldState& world) {
    std::vector<Position> out;
    for (const auto& h : world.humans) {
        if (h.compartment == Compartment::I) {
            out.push_back(h.position);
        }
    }
    return out;
}

TransitionReport step_compartments(WorldState& world, const EpidemicParams& params,
                                   double agent_beta, Rng& rng) {
    // Snapshot of the infectious set at step start; all draws below read only this.
    const std::vector<Position> infected = infected_positions(world);
    const double g = world.grid_size;

    TransitionReport report;
    for (auto& h : world.humans) {
        switch (h.compartment) {
            case Compartment::S: {
                const double e = exposure(h.position, infected, params.distance_decay,
                                          params.max_infection_distance, g);
                if (rng.bernoulli(infection_probability(e, params.beta))) {
                    h.compartment = Compartment::I;
                    ++report.new_infections;
                }
                break;
            }
            case Compartment::I:
                if (rng.bernoulli(params.lethality)) {
                    h.compartment = Compartment::D;
                } else if (rng.bernoulli(params.recovery)) {
                    h.compartment = Compartment::R;
                }
                break;
            case Compartment::R:
                if (rng.bernoulli(params.immunity_loss)) {
                    h.compartment = Compartment::S;
                }
                break;
            case Compartment::D: break;
        }
    }

    if (world.agent.compartment == Compartment::S) {
        const double e = exposure(world.agent.position, infected, params.distance_decay,
                                  params.max_infection_distance, g);
        report.agent_infection_probability = infection_probability(e, agent_beta);
        if (rng.bernoulli(report.agent_infection_probability)) {
            world.agent.compartment = Compartment::I;
            report.agent_infected = true;
        }
    }
    return report;
}

bool reinfect_if_extinct(WorldState& world, const EpidemicParams& params, Rng& rng,
                         int* reinfected) {
    if (reinfected) {
        *reinfected = 0;
    }
    const bool any_infected = std::any_of(world.humans.begin(), world.humans.end(), [](const auto& h) {
        return h.compartment == Compartment::I;
    });
    if (any_infected) {
        return true;
    }

    std::vector<std::size_t> eligible;
    for (std::size_t k = 0; k < world.humans.size(); ++k) {
        const auto& h = world.humans[k];
        if (h.compartment == Compartment::S &&
            toroidal_distance(h.position, world.agent.position, world.grid_size) >=
                params.safe_distance) {
            eligible.push_back(k);
        }
    }
    const auto wanted = static_cast<std::size_t>(params.reinfection_count);
    if (eligible.size() < wanted) {
        return false;
    }
    // Partial Fisher-Yates: the first `wanted` slots become a uniform sample.
    for (std::size_t k = 0; k < wanted; ++k) {
        const std::size_t j = k + rng.uniform_index(eligible.size() - k);
        std::swap(eligible[k], eligible[j]);
        world.humans[eligible[k]].compartment = Compartment::I;
    }
    if (reinfected) {
        *reinfected = static_cast<int>(wanted);
    }
    return true;
}

namespace {

template <typename Accept>
Position sample_position(Rng& rng, double grid_size, Accept&& accept, std::string_view what) {
    for (int attempt = 0; attempt < kPlacementRetries; ++attempt) {
        const Position p{rng.uniform(0.0, grid_size), rng.uniform(0.0, grid_size)};
        // uniform() can round up to exactly G.
        const Position w = wrap(p, grid_size);
        if (accept(w)) {
            return w;
        }
    }
    throw InfeasibleConfig(fmt::format("could not place {} after {} attempts; distance "
                                       "constraints are infeasible for this grid",
                                       what, kPlacementRetries));
}

}  // namespace

WorldState initialize(const SimConfig& config, Rng& rng) {
    validate(config);
    const auto g = static_cast<double>(config.grid_size);
    const auto n = static_cast<std::size_t>(config.n_humans);
    const auto n_infected = static_cast<std::size_t>(config.initial_infected);

    WorldState world;
    world.grid_size = g;
    world.agent.position = {g / 2.0, g / 2.0};
    world.agent.compartment = Compartment::S;
    world.agent.adherence = config.initial_agent_adherence;
    world.humans.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        world.humans[k].id = k;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t k = 0; k < n_infected; ++k) {
        const std::size_t j = k + rng.uniform_index(n - k);
        std::swap(order[k], order[j]);
    }
    const Position agent = world.agent.position;

    // Initially infected first, so later ones can check spacing against earlier ones.
    std::vector<Position> placed_infected;
    for (std::size_t k = 0; k < n_infected; ++k) {
        auto& h = world.humans[order[k]];
        h.compartment = Compartment::I;
        h.position = sample_position(
            rng, g,
            [&](Position p) {
                const double da = toroidal_distance(p, agent, g);
                if (da < config.initial_agent_distance || da < config.safe_distance) {
                    return false;
                }
                return std::all_of(placed_infected.begin(), placed_infected.end(), [&](Position q) {
                    return toroidal_distance(p, q, g) >= config.safe_distance;
                });
            },
            "initially infected human");
        placed_infected.push_back(h.position);
    }
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(n_infected), order.end());
    for (std::size_t k = n_infected; k < n; ++k) {
        auto& h = world.humans[order[k]];
        h.compartment = Compartment::S;
        h.position = sample_position(
            rng, g,
            [&](Position p) { return toroidal_distance(p, agent, g) >= config.initial_agent_distance; },
            "susceptible human");
    }

    if (config.movement_type == MovementType::workplace_home_cycle) {
        world.home_anchors.reserve(n);
        for (const auto& h : world.humans) {
            world.home_anchors.push_back(h.position);
        }
        const auto far_from_agent = [&](Position p) {
            return toroidal_distance(p, agent, g) >= config.safe_distance;
        };
        if (config.work_anchor_mode == WorkAnchorMode::shared) {
            world.work_anchors.assign(n, sample_position(rng, g, far_from_agent, "workplace"));
        } else {
            for (std::size_t k = 0; k < n; ++k) {
                world.work_anchors.push_back(sample_position(rng, g, far_from_agent, "workplace"));
            }
        }
    }
    return world;
}

}  // namespace contagion
