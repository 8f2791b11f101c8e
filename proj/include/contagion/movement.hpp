#pragma once

#include <string_view>

#include "contagion/epidemic.hpp"
#include "contagion/geometry.hpp"
#include "contagion/rng.hpp"

namespace contagion {

enum class MovementType { continuous_random, workplace_home_cycle };

/// How workplace anchors are drawn for the cycle model.
enum class WorkAnchorMode {
    shared,      ///< one common workplace per episode
    individual,  ///< an independent workplace per human
};

std::string_view to_string(MovementType m);
std::string_view to_string(WorkAnchorMode m);

/// Standard deviation of the per-axis Gaussian step before clamping to [-1, 1].
inline constexpr double kRandomMoveSigma = 0.5;

struct MovementModel {
    MovementType kind = MovementType::continuous_random;
    double movement_scale = 1.0;
    int cycle_period = 64;
};

/// Per-axis N(0, 0.5) clamped to [-1, 1], times `movement_scale`.
Displacement sample_random_move(Rng& rng, double movement_scale);

/// True while the cycle sends humans to work (first half of each period).
bool cycle_heading_to_work(int t, int cycle_period);

/// Step of length <= movement_scale along the wrapped shortest path toward the
/// anchor that is active at step `t`. Zero when already at the anchor.
Displacement cycle_move(Position current, Position home, Position work, int t,
                        const MovementModel& model, double grid_size);

/// Advances every living human by one step of `model`. Dead humans stay put and
/// draw nothing from `rng`.
void move_humans(WorldState& world, const MovementModel& model, Rng& rng);

}  // namespace contagion
