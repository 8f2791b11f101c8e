#include "contagion/movement.hpp"

#include <algorithm>

namespace contagion {

std::string_view to_string(MovementType m) {
    switch (m) {
        case MovementType::continuous_random: return "continuous_random";
        case MovementType::workplace_home_cycle: return "workplace_home_cycle";
    }
    return "?";
}

std::string_view to_string(WorkAnchorMode m) {
    switch (m) {
        case WorkAnchorMode::shared: return "shared";
        case WorkAnchorMode::individual: return "individual";
    }
    return "?";
}

Displacement sample_random_move(Rng& rng, double movement_scale) {
    const double dx = std::clamp(rng.normal(0.0, kRandomMoveSigma), -1.0, 1.0);
    const double dy = std::clamp(rng.normal(0.0, kRandomMoveSigma), -1.0, 1.0);
    return {dx * movement_scale, dy * movement_scale};
}

bool cycle_heading_to_work(int t, int cycle_period) {
    const int period = std::max(cycle_period, 1);
    const int phase = ((t % period) + period) % period;
    return phase < period / 2;
}

Displacement cycle_move(Position current, Position home, Position work, int t,
                        const MovementModel& model, double grid_size) {
    const Position target = cycle_heading_to_work(t, model.cycle_period) ? work : home;
    const Displacement to_target = wrapped_delta(current, target, grid_size);
    const double remaining = to_target.norm();
    if (remaining <= model.movement_scale) {
        return to_target;
    }
    const double k = model.movement_scale / remaining;
    return {to_target.dx * k, to_target.dy * k};
}

void move_humans(WorldState& world, const MovementModel& model, Rng& rng) {
    const double g = world.grid_size;
    for (auto& h : world.humans) {
        if (h.compartment == Compartment::D) {
            continue;
        }
        if (model.kind == MovementType::continuous_random) {
            const Displacement d = sample_random_move(rng, model.movement_scale);
            h.position = wrap({h.position.x + d.dx, h.position.y + d.dy}, g);
        } else {
            const Position home = world.home_anchors.at(h.id);
            const Position work = world.work_anchors.at(h.id);
            const Position target = cycle_heading_to_work(world.t, model.cycle_period) ? work : home;
            const Displacement d = cycle_move(h.position, home, work, world.t, model, g);
            if (d == wrapped_delta(h.position, target, g)) {
                // Arrival snaps exactly onto the anchor so the cycle is periodic.
                h.position = target;
            } else {
                h.position = wrap({h.position.x + d.dx, h.position.y + d.dy}, g);
            }
        }
    }
}

}  // namespace contagion
