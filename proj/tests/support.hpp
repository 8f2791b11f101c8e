#pragma once

#include <vector>

#include "contagion/epidemic.hpp"
#include "contagion/rng.hpp"

namespace testing {

inline contagion::WorldState world_with(double g, contagion::Position agent,
                                        std::vector<std::pair<contagion::Position, contagion::Compartment>> humans) {
    contagion::WorldState w;
    w.grid_size = g;
    w.agent.position = agent;
    for (std::size_t k = 0; k < humans.size(); ++k) {
        w.humans.push_back({k, humans[k].first, humans[k].second});
    }
    return w;
}

/// Uniform random world with compartments drawn from {S, I, R, D}.
inline contagion::WorldState random_world(contagion::Rng& rng, double g, std::size_t n) {
    contagion::WorldState w;
    w.grid_size = g;
    w.agent.position = {rng.uniform(0, g), rng.uniform(0, g)};
    for (std::size_t k = 0; k < n; ++k) {
        const auto c = static_cast<contagion::Compartment>(rng.uniform_index(4));
        w.humans.push_back({k, {rng.uniform(0, g), rng.uniform(0, g)}, c});
    }
    return w;
}

}  // namespace testing
