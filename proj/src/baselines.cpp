#include "contagion/baselines.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "contagion/errors.hpp"

namespace contagion {

Action stationary_action() { return {0.0, 0.0, 0.0}; }

Action random_action(Rng& rng) {
    const double dx = rng.uniform(-1.0, 1.0);
    const double dy = rng.uniform(-1.0, 1.0);
    const double alpha = rng.uniform01();
    return {dx, dy, alpha};
}

std::array<Displacement, 9> greedy_candidates(double s) {
    const double d = s / std::sqrt(2.0);
    return {{{0.0, 0.0}, {s, 0.0}, {-s, 0.0}, {0.0, s}, {0.0, -s}, {d, d}, {-d, d}, {d, -d}, {-d, -d}}};
}

std::optional<std::size_t> nearest_infected(const WorldState& world) {
    std::optional<std::size_t> best;
    double best_d = 0.0;
    for (std::size_t k = 0; k < world.humans.size(); ++k) {
        const auto& h = world.humans[k];
        if (h.compartment != Compartment::I) {
            continue;
        }
        const double d = toroidal_distance(world.agent.position, h.position, world.grid_size);
        if (!best || d < best_d) {
            best = k;
            best_d = d;
        }
    }
    return best;
}

Action greedy_action(const WorldState& world, double movement_scale) {
    const auto target = nearest_infected(world);
    if (!target) {
        return {0.0, 0.0, 1.0};
    }
    const double g = world.grid_size;
    const Position threat = world.humans[*target].position;
    const auto candidates = greedy_candidates(movement_scale);

    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const Position next = wrap({world.agent.position.x + candidates[k].dx,
                                    world.agent.position.y + candidates[k].dy},
                                   g);
        const double d = toroidal_distance(next, threat, g);
        if (d > best_d) {
            best = k;
            best_d = d;
        }
    }
    return {candidates[best].dx, candidates[best].dy, 1.0};
}

namespace {

class StationaryPolicy final : public Policy {
public:
    void reset(std::uint64_t) override {}
    Action act(const WorldState&) override { return stationary_action(); }
    PolicyKind kind() const override { return PolicyKind::stationary; }
};

class RandomPolicy final : public Policy {
public:
    void reset(std::uint64_t seed) override { rng_ = Rng(seed, Stream::policy); }
    Action act(const WorldState&) override { return random_action(rng_); }
    PolicyKind kind() const override { return PolicyKind::random; }

private:
    Rng rng_{0, Stream::policy};
};

class GreedyPolicy final : public Policy {
public:
    explicit GreedyPolicy(double movement_scale) : scale_(movement_scale) {}
    void reset(std::uint64_t) override {}
    Action act(const WorldState& world) override { return greedy_action(world, scale_); }
    PolicyKind kind() const override { return PolicyKind::greedy; }

private:
    double scale_;
};

class ReplayPolicy final : public Policy {
public:
    explicit ReplayPolicy(std::vector<Action> actions) : actions_(std::move(actions)) {}
    void reset(std::uint64_t) override { next_ = 0; }
    Action act(const WorldState&) override {
        return next_ < actions_.size() ? actions_[next_++] : stationary_action();
    }
    PolicyKind kind() const override { return PolicyKind::replay; }

private:
    std::vector<Action> actions_;
    std::size_t next_ = 0;
};

constexpr std::string_view kReplayPrefix = "replay:";

}  // namespace

std::vector<Action> parse_actions(std::string_view text) {
    std::vector<Action> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        for (char& ch : line) {
            if (ch == ',') {
                ch = ' ';
            }
        }
        std::istringstream fields(line);
        std::vector<double> values;
        double v = 0.0;
        while (fields >> v) {
            values.push_back(v);
        }
        if (!fields.eof()) {
            throw ConfigError(fmt::format("actions line {}: not a number", line_no));
        }
        if (values.empty()) {
            continue;
        }
        if (values.size() != 3) {
            throw ConfigError(fmt::format("actions line {}: expected 3 values, got {}", line_no,
                                          values.size()));
        }
        out.push_back({values[0], values[1], values[2]});
    }
    return out;
}

std::vector<Action> load_actions(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot read actions file '{}'", path));
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_actions(ss.str());
}

std::unique_ptr<Policy> make_policy(std::string_view spec, const SimConfig& config) {
    if (spec == "stationary") {
        return std::make_unique<StationaryPolicy>();
    }
    if (spec == "random") {
        return std::make_unique<RandomPolicy>();
    }
    if (spec == "greedy") {
        return std::make_unique<GreedyPolicy>(config.movement_scale);
    }
    if (spec.starts_with(kReplayPrefix)) {
        return std::make_unique<ReplayPolicy>(load_actions(std::string(spec.substr(kReplayPrefix.size()))));
    }
    throw ConfigError(fmt::format("unknown policy '{}' (expected stationary, random, greedy or "
                                  "replay:<actions-file>)",
                                  spec));
}

std::string policy_label(std::string_view spec) {
    if (spec.starts_with(kReplayPrefix)) {
        return "replay";
    }
    return std::string(spec);
}

}  // namespace contagion
