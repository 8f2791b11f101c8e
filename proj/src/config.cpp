#include "contagion/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "contagion/errors.hpp"

namespace contagion {

std::string_view to_string(RenderMode m) { return m == RenderMode::rgb_array ? "rgb_array" : "None"; }

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw ConfigError(fmt::format("{}: invalid value '{}' (expected {})", key, value, expected));
}

[[noreturn]] void out_of_range(std::string_view key, std::string_view value, std::string_view range) {
    throw ConfigError(fmt::format("{}: value {} outside allowed range {}", key, value, range));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value, std::string_view expected) {
    value = trim(value);
    if (!value.empty() && value.front() == '+') {
        value.remove_prefix(1);
    }
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end || value.empty()) {
        bad_value(key, value, expected);
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(out)) {
            bad_value(key, value, expected);
        }
    }
    return out;
}

int parse_int(std::string_view key, std::string_view value, long long lo, std::string_view range) {
    const auto v = parse_number<long long>(key, value, "an integer");
    if (v < lo || v > std::numeric_limits<int>::max()) {
        out_of_range(key, value, range);
    }
    return static_cast<int>(v);
}

double parse_real(std::string_view key, std::string_view value, double lo, double hi,
                  std::string_view range) {
    const double v = parse_number<double>(key, value, "a number");
    if (v < lo || v > hi) {
        out_of_range(key, value, range);
    }
    return v;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_probability(std::string_view key, std::string_view value) {
    return parse_real(key, value, 0.0, 1.0, "[0, 1]");
}

double parse_nonnegative(std::string_view key, std::string_view value) {
    return parse_real(key, value, 0.0, kInf, "[0, inf)");
}

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view key, std::string_view value,
                const std::pair<std::string_view, Enum> (&table)[N]) {
    value = trim(value);
    for (const auto& [name, e] : table) {
        if (name == value) {
            return e;
        }
    }
    std::vector<std::string_view> names;
    for (const auto& entry : table) {
        names.push_back(entry.first);
    }
    bad_value(key, value, fmt::format("one of {}", fmt::join(names, ", ")));
}

constexpr std::pair<std::string_view, MovementType> kMovementNames[] = {
    {"continuous_random", MovementType::continuous_random},
    {"workplace_home_cycle", MovementType::workplace_home_cycle},
};

constexpr std::pair<std::string_view, WorkAnchorMode> kAnchorNames[] = {
    {"shared", WorkAnchorMode::shared},
    {"individual", WorkAnchorMode::individual},
};

constexpr std::pair<std::string_view, RewardKind> kRewardNames[] = {
    {"constant", RewardKind::constant},
    {"sparse", RewardKind::constant},
    {"reduce_infection", RewardKind::reduce_infection},
    {"combined", RewardKind::combined},
    {"max_nearest_distance", RewardKind::max_nearest_distance},
    {"potential_field", RewardKind::potential_field},
};

constexpr std::pair<std::string_view, RewardAblation> kAblationNames[] = {
    {"full", RewardAblation::full},
    {"no_magnitude", RewardAblation::no_magnitude},
    {"no_direction", RewardAblation::no_direction},
    {"no_movement", RewardAblation::no_movement},
    {"no_adherence", RewardAblation::no_adherence},
    {"no_health", RewardAblation::no_health},
    {"no_susceptible_repulsion", RewardAblation::no_susceptible_repulsion},
};

constexpr std::pair<std::string_view, RenderMode> kRenderNames[] = {
    {"None", RenderMode::none},
    {"none", RenderMode::none},
    {"rgb_array", RenderMode::rgb_array},
};

std::vector<std::uint64_t> parse_seeds(std::string_view key, std::string_view value) {
    std::vector<std::uint64_t> seeds;
    std::string_view rest = value;
    while (true) {
        const auto comma = rest.find(',');
        const std::string_view item = trim(rest.substr(0, comma));
        seeds.push_back(parse_number<std::uint64_t>(key, item, "a comma-separated list of seeds"));
        if (comma == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(comma + 1);
    }
    std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
    if (unique.size() != seeds.size()) {
        bad_value(key, value, "distinct seeds");
    }
    return seeds;
}

struct Field {
    std::string_view name;
    void (*set)(SimConfig&, std::string_view key, std::string_view value);
    std::string (*get)(const SimConfig&);
};

std::string fmt_real(double v) { return fmt::format("{}", v); }

#define CONTAGION_INT_FIELD(name, lo, range)                                               \
    Field {                                                                                \
        #name, [](SimConfig& c, std::string_view k, std::string_view v) {                \
            c.name = parse_int(k, v, lo, range);                                        \
        },                                                                                 \
            [](const SimConfig& c) { return std::to_string(c.name); }                      \
    }

#define CONTAGION_REAL_FIELD(name, parser)                                                 \
    Field {                                                                                \
        #name, [](SimConfig& c, std::string_view k, std::string_view v) {                \
            c.name = parser(k, v);                                                      \
        },                                                                                 \
            [](const SimConfig& c) { return fmt_real(c.name); }                            \
    }

#define CONTAGION_ENUM_FIELD(name, table)                                                  \
    Field {                                                                                \
        #name, [](SimConfig& c, std::string_view k, std::string_view v) {                \
            c.name = parse_enum(k, v, table);                                           \
        },                                                                                 \
            [](const SimConfig& c) { return std::string(to_string(c.name)); }              \
    }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        CONTAGION_INT_FIELD(simulation_time, 1, "[1, inf)"),
        CONTAGION_INT_FIELD(grid_size, 1, "[1, inf)"),
        CONTAGION_INT_FIELD(n_humans, 0, "[0, inf)"),
        CONTAGION_INT_FIELD(initial_infected, 0, "[0, n_humans]"),
        CONTAGION_REAL_FIELD(infection_rate, parse_probability),
        CONTAGION_REAL_FIELD(initial_agent_adherence, parse_probability),
        CONTAGION_REAL_FIELD(distance_decay, parse_nonnegative),
        CONTAGION_REAL_FIELD(lethality_rate, parse_probability),
        CONTAGION_REAL_FIELD(immunity_loss_prob, parse_probability),
        CONTAGION_REAL_FIELD(recovery_rate, parse_probability),
        Field{"adherence_penalty_factor",
              [](SimConfig& c, std::string_view k, std::string_view v) {
                  c.adherence_penalty_factor = parse_real(k, v, 1.0, kInf, "[1, inf)");
              },
              [](const SimConfig& c) { return fmt_real(c.adherence_penalty_factor); }},
        CONTAGION_REAL_FIELD(adherence_effectiveness, parse_probability),
        CONTAGION_ENUM_FIELD(movement_type, kMovementNames),
        CONTAGION_REAL_FIELD(movement_scale, parse_probability),
        Field{"visibility_radius",
              [](SimConfig& c, std::string_view k, std::string_view v) {
                  const double r = parse_number<double>(k, v, "a number");
                  if (r != -1.0 && r < 0.0) {
                      out_of_range(k, v, "{-1} U [0, inf)");
                  }
                  c.visibility_radius = r;
              },
              [](const SimConfig& c) { return fmt_real(c.visibility_radius); }},
        CONTAGION_INT_FIELD(reinfection_count, 0, "[0, inf)"),
        CONTAGION_REAL_FIELD(safe_distance, parse_nonnegative),
        CONTAGION_REAL_FIELD(initial_agent_distance, parse_nonnegative),
        Field{"max_infection_distance",
              [](SimConfig& c, std::string_view k, std::string_view v) {
                  const double r = parse_number<double>(k, v, "a number");
                  if (r != -1.0 && !(r > 0.0)) {
                      out_of_range(k, v, "{-1} U (0, inf)");
                  }
                  c.max_infection_distance = r;
              },
              [](const SimConfig& c) { return fmt_real(c.max_infection_distance); }},
        CONTAGION_ENUM_FIELD(reward_function_type, kRewardNames),
        CONTAGION_ENUM_FIELD(reward_ablation, kAblationNames),
        CONTAGION_ENUM_FIELD(render_mode, kRenderNames),
        CONTAGION_INT_FIELD(cycle_period, 2, "[2, inf)"),
        CONTAGION_ENUM_FIELD(work_anchor_mode, kAnchorNames),
        Field{"seeds",
              [](SimConfig& c, std::string_view k, std::string_view v) { c.seeds = parse_seeds(k, v); },
              [](const SimConfig& c) { return fmt::format("{}", fmt::join(c.seeds, ",")); }},
        CONTAGION_INT_FIELD(episodes, 1, "[1, inf)"),
    };
    return table;
}

#undef CONTAGION_INT_FIELD
#undef CONTAGION_REAL_FIELD
#undef CONTAGION_ENUM_FIELD

const Field& find_field(std::string_view key) {
    for (const auto& f : fields()) {
        if (f.name == key) {
            return f;
        }
    }
    throw ConfigError(fmt::format("unknown configuration key '{}'", key));
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& f : fields()) {
            out.emplace_back(f.name);
        }
        return out;
    }();
    return keys;
}

void set_config_value(SimConfig& config, std::string_view key, std::string_view value) {
    find_field(trim(key)).set(config, trim(key), trim(value));
}

std::string get_config_value(const SimConfig& config, std::string_view key) {
    return find_field(key).get(config);
}

void validate(const SimConfig& c) {
    if (c.initial_infected > c.n_humans) {
        throw ConfigError(fmt::format("initial_infected: value {} outside allowed range [0, {}]",
                                      c.initial_infected, c.n_humans));
    }
    if (c.reward_ablation != RewardAblation::full &&
        c.reward_function_type != RewardKind::potential_field) {
        throw ConfigError(fmt::format("reward_ablation: '{}' requires reward_function_type "
                                      "potential_field",
                                      to_string(c.reward_ablation)));
    }
    if (c.reward_function_type == RewardKind::max_nearest_distance &&
        !(c.max_infection_distance > 0.0)) {
        throw ConfigError("max_infection_distance: max_nearest_distance reward needs a positive "
                          "distance threshold");
    }
    if (c.seeds.empty()) {
        throw ConfigError("seeds: at least one seed is required");
    }
}

SimConfig parse_config(std::string_view text) {
    SimConfig config;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
        }
        const std::string_view key = trim(line.substr(0, eq));
        if (!seen.emplace(key).second) {
            throw ConfigError(fmt::format("line {}: duplicate key '{}'", line_no, key));
        }
        set_config_value(config, key, line.substr(eq + 1));
    }
    validate(config);
    return config;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot read config file '{}'", path.string()));
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_env_overrides(
    SimConfig& config,
    const std::function<std::optional<std::string>(const std::string&)>& getenv) {
    for (const auto& key : config_keys()) {
        std::string var(kEnvPrefix);
        for (char ch : key) {
            var.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
        }
        if (auto value = getenv(var)) {
            set_config_value(config, key, *value);
        }
    }
    validate(config);
}

void apply_env_overrides(SimConfig& config) {
    apply_env_overrides(config, [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) {
            return std::string(v);
        }
        return std::nullopt;
    });
}

std::string to_text(const SimConfig& config) {
    std::string out;
    for (const auto& f : fields()) {
        out += fmt::format("{} = {}\n", f.name, f.get(config));
    }
    return out;
}

EpidemicParams epidemic_params(const SimConfig& c) {
    EpidemicParams p;
    p.beta = c.infection_rate;
    p.distance_decay = c.distance_decay;
    p.recovery = c.recovery_rate;
    p.immunity_loss = c.immunity_loss_prob;
    p.lethality = c.lethality_rate;
    p.max_infection_distance = c.max_infection_distance;
    p.reinfection_count = c.reinfection_count;
    p.safe_distance = c.safe_distance;
    p.initial_agent_distance = c.initial_agent_distance;
    p.initial_infected = c.initial_infected;
    return p;
}

MovementModel movement_model(const SimConfig& c) {
    return {c.movement_type, c.movement_scale, c.cycle_period};
}

}  // namespace contagion
