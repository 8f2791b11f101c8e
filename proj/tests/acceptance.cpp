// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "contagion/baselines.hpp"
#include "contagion/environment.hpp"
#include "contagion/experiment.hpp"
#include "contagion/geometry.hpp"
#include "contagion/rewards.hpp"
#include "contagion/stats.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace contagion;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict determinism() {
    const fs::path root = fs::temp_directory_path() / "contagion_acceptance_det";
    fs::remove_all(root);
    SimConfig c;
    c.episodes = 5;
    bool same = true;
    std::size_t bytes = 0;
    for (const char* policy : {"stationary", "random", "greedy"}) {
        ExperimentManifest a{c, policy, root / "a", false, false, 1};
        ExperimentManifest b{c, policy, root / "b", false, false, 1};
        run_experiment(a);
        run_experiment(b);
        const std::string name = output_stem(a) + ".episodes.csv";
        const std::string x = slurp(a.out_dir / name);
        same = same && !x.empty() && x == slurp(b.out_dir / name);
        bytes += x.size();
    }
    fs::remove_all(root);
    return {same, fmt::format("3 policies x 3 seeds x 5 episodes, {} CSV bytes compared", bytes)};
}

Verdict geometry_oracle() {
    Rng rng(101);
    double worst = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const double g = rng.uniform(1.0, 200.0);
        const Position a{rng.uniform(0, g), rng.uniform(0, g)};
        const Position b{rng.uniform(0, g), rng.uniform(0, g)};
        worst = std::max(worst, std::abs(toroidal_distance(a, b, g) - oracle::image_distance(a, b, g)));
    }
    return {worst <= 1e-12, fmt::format("1e5 pairs, max |error| = {:.3g}", worst)};
}

Verdict infection_kernel() {
    EpidemicParams p;
    p.beta = 0.5;
    p.distance_decay = 0.3;
    p.recovery = 0.0;
    p.lethality = 0.0;
    Rng rng(Rng(202, Stream::transitions));
    const int trials = 100000;
    int hits = 0;
    for (int k = 0; k < trials; ++k) {
        auto w = testing::world_with(50, {40, 40}, {{{5, 5}, Compartment::S}, {{5, 5}, Compartment::I}});
        step_compartments(w, p, 0.0, rng);
        hits += w.humans[0].compartment == Compartment::I;
    }
    const double freq = static_cast<double>(hits) / trials;
    const double target = -std::expm1(-0.5);
    return {std::abs(freq - target) <= 0.005,
            fmt::format("1e5 trials, frequency {:.5f} vs {:.5f}", freq, target)};
}

Verdict greedy_oracle() {
    Rng rng(303);
    int agree = 0;
    const int worlds = 10000;
    for (int k = 0; k < worlds; ++k) {
        const auto w = testing::random_world(rng, 50, 1 + rng.uniform_index(40));
        const Action a = greedy_action(w, 1.0);
        const auto ref = oracle::greedy_brute_force(w, 1.0);
        const auto cands = greedy_candidates(1.0);
        const bool ok = ref.index < 0
                            ? a == Action{0, 0, 1}
                            : a.dx == cands[static_cast<std::size_t>(ref.index)].dx &&
                                  a.dy == cands[static_cast<std::size_t>(ref.index)].dy && a.alpha == 1.0;
        agree += ok;
    }
    return {agree == worlds, fmt::format("{}/{} worlds agree", agree, worlds)};
}

Verdict potential_field() {
    const PotentialFieldParams p;
    const auto w = testing::world_with(50, {25, 25}, {{{22, 24}, Compartment::I}});
    const ForceVector f = potential_force(w.agent.position, w.humans, p, w.grid_size);
    const double n = f.norm();
    const double mag = std::min(n, 1.0);
    const Displacement along{f.fx / n * mag, f.fy / n * mag};
    const auto full = potential_field_terms(f, along, Compartment::S, 1.0, p, RewardAblation::full);
    double worst = std::abs(full.total - 1.0);
    const auto check = [&](RewardAblation abl, double expected) {
        const auto t = potential_field_terms(f, along, Compartment::S, 1.0, p, abl);
        worst = std::max(worst, std::abs(t.total - expected));
    };
    check(RewardAblation::no_movement, 0.3);
    check(RewardAblation::no_health, 0.9);
    check(RewardAblation::no_adherence, 0.8);
    check(RewardAblation::no_direction, 0.3 + 0.7 * full.r_mag);
    check(RewardAblation::no_magnitude, 0.3 + 0.7 * full.r_dir);
    const auto inf = potential_field_terms(f, along, Compartment::I, 1.0, p, RewardAblation::full);
    worst = std::max(worst, std::abs(inf.total - 0.9));
    return {worst <= 1e-12, fmt::format("aligned total {:.17g}, max ablation error {:.3g}", full.total, worst)};
}

Verdict statistics_oracle() {
    Rng rng(404);
    double worst = 0.0;
    int cases = 0;
    for (std::size_t n = 2; n <= 12; ++n) {
        for (std::size_t na = 1; na < n; ++na) {
            for (int rep = 0; rep < 4; ++rep) {
                std::vector<double> a(na), b(n - na);
                for (auto* v : {&a, &b}) {
                    for (double& x : *v) {
                        x = rep < 2 ? static_cast<double>(rng.uniform_index(5)) : rng.normal(0, 1);
                    }
                }
                const auto got = mann_whitney_u(a, b);
                const auto ref = oracle::exact_mann_whitney(a, b);
                if (got.u_a != ref.u_a) {
                    worst = 1.0;
                }
                worst = std::max({worst, std::abs(got.p_two_sided - ref.p_two_sided),
                                  std::abs(got.p_greater - ref.p_greater), std::abs(got.p_less - ref.p_less)});
                ++cases;
            }
        }
    }
    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    const double p = mann_whitney_u(a, b).p_two_sided;
    return {worst <= 1e-12 && std::abs(p - 0.1) <= 1e-12,
            fmt::format("{} samples, max p error {:.3g}; [1,2,3] vs [4,5,6] p = {:.15g}", cases, worst, p)};
}

Verdict baseline_ordering() {
    const SimConfig c;
    std::map<std::string, SampleSet> durations;
    std::map<std::string, double> rates;
    for (const char* policy : {"stationary", "random", "greedy"}) {
        const auto rows = run_experiment({c, policy, {}, false, false, 1});
        SampleSet s;
        s.by_seed.resize(c.seeds.size());
        double rate = 0;
        for (const auto& r : rows) {
            const auto idx = static_cast<std::size_t>(
                std::find(c.seeds.begin(), c.seeds.end(), r.seed) - c.seeds.begin());
            s.by_seed[idx].push_back(r.duration);
            rate += r.infections_per_step;
        }
        rates[policy] = rate / static_cast<double>(rows.size());
        durations[policy] = s;
    }
    const Report rep = build_report(durations, rates);
    bool greedy_wins = true;
    bool stat_random_ns = false;
    std::string detail;
    for (const auto& pol : rep.policies) {
        detail += fmt::format("{} mean {:.1f}; ", pol.policy, pol.mean_duration);
    }
    for (const auto& t : rep.comparisons) {
        detail += fmt::format("{} vs {} p2={:.3g} p1c={:.3g}; ", t.agent_a, t.agent_b, t.p_two_sided,
                              t.p_one_sided_corrected);
        const bool has_greedy = t.agent_a == "greedy" || t.agent_b == "greedy";
        if (has_greedy) {
            greedy_wins = greedy_wins && t.winner == std::optional<std::string>("greedy") &&
                          t.p_one_sided_corrected < 0.001;
        } else {
            stat_random_ns = t.p_two_sided >= 0.05;
        }
    }
    return {greedy_wins && stat_random_ns, detail};
}

Verdict visibility() {
    Rng rng(505);
    bool identical = true;
    bool monotone = true;
    for (int k = 0; k < 10000; ++k) {
        const double g = rng.uniform(5, 100);
        const auto w = testing::random_world(rng, g, rng.uniform_index(50));
        const double d_max = max_grid_distance(g);
        identical = identical && observe(w, -1) == observe(w, d_max) &&
                    observe(w, -1) == observe(w, d_max + rng.uniform(0, 10));
        const double r1 = rng.uniform(0, d_max);
        const double r2 = rng.uniform(r1, d_max);
        const auto o1 = observe(w, r1);
        const auto o2 = observe(w, r2);
        for (std::size_t h = 0; h < w.humans.size(); ++h) {
            monotone = monotone && (!o1.visible(h) || o2.visible(h));
        }
    }
    return {identical && monotone, fmt::format("1e4 worlds, full-radius identical: {}, monotone: {}",
                                               identical, monotone)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"determinism", determinism},
        {"geometry-oracle", geometry_oracle},
        {"infection-kernel", infection_kernel},
        {"greedy-oracle", greedy_oracle},
        {"potential-field-reward", potential_field},
        {"statistics-oracle", statistics_oracle},
        {"baseline-ordering", baseline_ordering},
        {"visibility-sanity", visibility},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = {false, fmt::format("exception: {}", e.what())};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        fmt::print("{} {} ({:.1f}s) {}\n", v.pass ? "PASS" : "FAIL", name, secs, v.detail);
        std::fflush(stdout);
        failures += !v.pass;
    }
    fmt::print("SKIP trained-agent-results excluded: learning-agent numbers need multi-million-step "
               "training; covered by the environment contract tests instead\n");
    return failures == 0 ? 0 : 1;
}
