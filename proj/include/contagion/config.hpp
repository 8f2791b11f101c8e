#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contagion/epidemic.hpp"
#include "contagion/movement.hpp"
#include "contagion/rewards.hpp"

namespace contagion {

enum class RenderMode { none, rgb_array };

std::string_view to_string(RenderMode m);

/// Full environment configuration. Field names match the configuration keys.
/// Defaults are the reference experiment settings.
struct SimConfig {
    int simulation_time = 512;
    int grid_size = 50;
    int n_humans = 40;
    int initial_infected = 10;
    double infection_rate = 0.5;
    double initial_agent_adherence = 0.0;
    double distance_decay = 0.3;
    double lethality_rate = 0.0;
    double immunity_loss_prob = 0.25;
    double recovery_rate = 0.1;
    /// Parsed and range-checked, but no reward formula reads it.
    double adherence_penalty_factor = 1.0;
    double adherence_effectiveness = 0.2;
    MovementType movement_type = MovementType::continuous_random;
    double movement_scale = 1.0;
    double visibility_radius = -1.0;
    int reinfection_count = 5;
    double safe_distance = 10.0;
    double initial_agent_distance = 5.0;
    double max_infection_distance = 10.0;
    RewardKind reward_function_type = RewardKind::potential_field;
    RewardAblation reward_ablation = RewardAblation::full;
    RenderMode render_mode = RenderMode::none;

    // Workplace/home cycle settings.
    int cycle_period = 64;
    WorkAnchorMode work_anchor_mode = WorkAnchorMode::shared;

    // Experiment protocol.
    std::vector<std::uint64_t> seeds = {0, 1, 2};
    int episodes = 100;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Every recognised key, in canonical order.
const std::vector<std::string>& config_keys();

/// Sets one field from its textual value. Throws ConfigError for an unknown key,
/// an unparsable value, or a value outside the key's range.
void set_config_value(SimConfig& config, std::string_view key, std::string_view value);

/// Current value of `key` in the same textual form `set_config_value` accepts.
std::string get_config_value(const SimConfig& config, std::string_view key);

/// Cross-field checks (initial_infected <= n_humans, reward/cutoff compatibility).
void validate(const SimConfig& config);

/// Parses `key = value` lines; '#' starts a comment. Keys absent from the text keep
/// their defaults. Duplicate keys are an error.
SimConfig parse_config(std::string_view text);

SimConfig load_config(const std::filesystem::path& path);

/// Applies CONTAGION_<KEY> overrides, e.g. CONTAGION_INFECTION_RATE=0.7.
/// `getenv` is injectable for tests.
inline constexpr std::string_view kEnvPrefix = "CONTAGION_";
void apply_env_overrides(SimConfig& config,
                         const std::function<std::optional<std::string>(const std::string&)>&
                             getenv);
void apply_env_overrides(SimConfig& config);

/// Canonical text form; parse_config(to_text(c)) == c.
std::string to_text(const SimConfig& config);

EpidemicParams epidemic_params(const SimConfig& config);
MovementModel movement_model(const SimConfig& config);

}  // namespace contagion
