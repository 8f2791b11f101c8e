#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "contagion/geometry.hpp"
#include "contagion/rng.hpp"

namespace contagion {

struct SimConfig;

/// SIRS+D compartments. D is absorbing; only S->I, I->R, I->D and R->S occur.
enum class Compartment : unsigned char { S, I, R, D };

std::string_view to_string(Compartment c);

struct Individual {
    std::size_t id = 0;
    Position position;
    Compartment compartment = Compartment::S;

    friend bool operator==(const Individual&, const Individual&) = default;
};

struct Agent {
    Position position;
    Compartment compartment = Compartment::S;
    double adherence = 0.0;

    friend bool operator==(const Agent&, const Agent&) = default;
};

/// Sentinel for "no exposure cutoff".
inline constexpr double kUnlimitedDistance = -1.0;

struct EpidemicParams {
    double beta = 0.5;
    double distance_decay = 0.3;
    double recovery = 0.1;
    double immunity_loss = 0.25;
    double lethality = 0.0;
    /// kUnlimitedDistance (any negative value) disables the cutoff.
    double max_infection_distance = 10.0;
    int reinfection_count = 5;
    double safe_distance = 10.0;
    double initial_agent_distance = 5.0;
    int initial_infected = 10;
};

struct WorldState {
    double grid_size = 50.0;
    std::vector<Individual> humans;
    Agent agent;
    /// Steps taken so far; 0 right after initialization.
    int t = 0;
    /// Anchors for the workplace/home cycle, indexed by human id.
    std::vector<Position> home_anchors;
    std::vector<Position> work_anchors;

    friend bool operator==(const WorldState&, const WorldState&) = default;
};

struct CompartmentCounts {
    int s = 0;
    int i = 0;
    int r = 0;
    int d = 0;

    int total() const { return s + i + r + d; }
    friend bool operator==(const CompartmentCounts&, const CompartmentCounts&) = default;
};

CompartmentCounts count_humans(const WorldState& world);

/// Sum of exp(-k_d * d) over infected positions within `max_dist` of `pos`.
/// A negative `max_dist` means no cutoff.
double exposure(Position pos, std::span<const Position> infected, double distance_decay,
                double max_dist, double grid_size);

/// 1 - exp(-beta * exposure).
double infection_probability(double exposure, double beta);

/// Positions of every human currently in I.
std::vector<Position> infected_positions(const WorldState& world);

struct TransitionReport {
    /// Infection probability the agent faced this step.
    double agent_infection_probability = 0.0;
    /// Humans that went S->I by transmission.
    int new_infections = 0;
    bool agent_infected = false;
};

/// One synchronous SIRS+D update. Every draw sees the compartments as they were
/// at entry. Humans use `params.beta`; the agent, if susceptible, uses `agent_beta`.
/// Within the I branch death is drawn before recovery.
TransitionReport step_compartments(WorldState& world, const EpidemicParams& params,
                                   double agent_beta, Rng& rng);

/// When no human is infected, turns `reinfection_count` randomly chosen susceptibles
/// at least `safe_distance` from the agent into I. Returns false, leaving the world
/// untouched, if too few eligible susceptibles exist.
bool reinfect_if_extinct(WorldState& world, const EpidemicParams& params, Rng& rng,
                         int* reinfected = nullptr);

/// Rejection-sampling attempts allowed per individual during placement.
inline constexpr int kPlacementRetries = 10000;

/// Agent at grid center, humans placed uniformly subject to the distance
/// constraints. Throws InfeasibleConfig when placement exhausts its retries.
WorldState initialize(const SimConfig& config, Rng& placement_rng);

}  // namespace contagion
