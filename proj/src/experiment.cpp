#include "contagion/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <condition_variable>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "contagion/errors.hpp"
#include "contagion/render.hpp"

namespace contagion {

std::string serialize_row(const EpisodeRow& r) {
    return fmt::format("{},{},{},{},{},{},{}", r.seed, r.episode, r.duration, r.truncated ? 1 : 0,
                       r.cumulative_reward, r.total_infections, r.infections_per_step);
}

namespace {

template <typename T>
T parse_field(std::string_view s, std::string_view what) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw std::runtime_error(fmt::format("episode row: bad {} '{}'", what, s));
    }
    return v;
}

}  // namespace

EpisodeRow parse_row(std::string_view line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
        line.remove_suffix(1);
    }
    std::vector<std::string_view> cells;
    while (true) {
        const auto comma = line.find(',');
        cells.push_back(line.substr(0, comma));
        if (comma == std::string_view::npos) {
            break;
        }
        line.remove_prefix(comma + 1);
    }
    if (cells.size() != 7) {
        throw std::runtime_error(fmt::format("episode row: expected 7 fields, got {}", cells.size()));
    }
    EpisodeRow r;
    r.seed = parse_field<std::uint64_t>(cells[0], "seed");
    r.episode = parse_field<int>(cells[1], "episode_idx");
    r.duration = parse_field<int>(cells[2], "duration");
    const int truncated = parse_field<int>(cells[3], "truncated");
    if (truncated != 0 && truncated != 1) {
        throw std::runtime_error("episode row: truncated must be 0 or 1");
    }
    r.truncated = truncated == 1;
    r.cumulative_reward = parse_field<double>(cells[4], "cumulative_reward");
    r.total_infections = parse_field<int>(cells[5], "total_infections");
    r.infections_per_step = parse_field<double>(cells[6], "infections_per_step");
    return r;
}

std::vector<EpisodeRow> read_episode_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot read '{}'", path.string()));
    }
    std::string line;
    if (!std::getline(in, line) || line.rfind(kEpisodeCsvHeader, 0) != 0) {
        throw std::runtime_error(fmt::format("'{}' is missing the episode header", path.string()));
    }
    std::vector<EpisodeRow> rows;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            rows.push_back(parse_row(line));
        }
    }
    return rows;
}

EpisodeResult run_episode(Environment& env, Policy& policy, std::uint64_t episode_seed,
                          const FrameSink& on_frame) {
    env.reset(episode_seed);
    policy.reset(episode_seed);
    EpisodeResult result;
    result.record.steps.reserve(static_cast<std::size_t>(env.config().simulation_time));
    while (!env.done()) {
        const Action action = policy.act(env.world());
        const StepOutcome out = env.step(action);
        StepRecord rec;
        rec.action = action.clamped();
        rec.reward = out.reward;
        rec.counts = out.info.counts;
        rec.agent_infection_probability = out.info.agent_infection_probability;
        rec.new_infections = out.info.new_infections;
        rec.reinfected = out.info.reinfected;
        result.record.steps.push_back(rec);
        result.record.truncated = out.truncated;
        if (on_frame) {
            on_frame(env.world(), out.info.t);
        }
    }
    result.record.agent_infected = env.agent_was_infected();
    result.summary = episode_metrics(result.record);
    return result;
}

std::string trace_jsonl(const EpisodeRecord& record, std::uint64_t seed, int episode) {
    std::string out;
    for (std::size_t k = 0; k < record.steps.size(); ++k) {
        const auto& s = record.steps[k];
        const bool last = k + 1 == record.steps.size();
        nlohmann::json j = {
            {"seed", seed},
            {"episode", episode},
            {"t", k + 1},
            {"action", {s.action.dx, s.action.dy, s.action.alpha}},
            {"reward", s.reward},
            {"counts", {{"S", s.counts.s}, {"I", s.counts.i}, {"R", s.counts.r}, {"D", s.counts.d}}},
            {"agent_infection_probability", s.agent_infection_probability},
            {"new_infections", s.new_infections},
            {"reinfected", s.reinfected},
            {"terminated", last && !record.truncated},
            {"truncated", last && record.truncated},
        };
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string output_stem(const ExperimentManifest& manifest) { return policy_label(manifest.policy); }

namespace {

struct Job {
    std::size_t seed_index;
    int episode;
};

struct Slot {
    EpisodeRow row;
    std::string trace;
};

Slot play(const ExperimentManifest& m, Environment& env, Policy& policy, const Job& job,
          const std::filesystem::path& frame_dir) {
    const std::uint64_t seed = m.config.seeds[job.seed_index];
    const std::uint64_t ep_seed = episode_seed(seed, static_cast<std::uint64_t>(job.episode));
    FrameSink sink;
    if (!frame_dir.empty()) {
        const std::string stem = output_stem(m);
        sink = [&](const WorldState& world, int t) {
            write_ppm(frame_dir / fmt::format("{}_s{}_e{}_t{:04}.ppm", stem, seed, job.episode, t),
                      render_frame(world));
        };
    }
    const EpisodeResult res = run_episode(env, policy, ep_seed, sink);
    Slot slot;
    slot.row = {seed,
                job.episode,
                res.summary.duration,
                res.summary.truncated,
                res.summary.cumulative_reward,
                res.summary.total_infections,
                res.summary.infections_per_step};
    if (m.trace) {
        slot.trace = trace_jsonl(res.record, seed, job.episode);
    }
    return slot;
}

class OutputFiles {
public:
    OutputFiles(const ExperimentManifest& m) {
        if (m.out_dir.empty()) {
            return;
        }
        std::filesystem::create_directories(m.out_dir);
        const std::string stem = output_stem(m);
        {
            std::ofstream cfg(m.out_dir / (stem + ".config"));
            cfg << "# policy = " << m.policy << '\n' << to_text(m.config);
            check(cfg, stem + ".config");
        }
        csv_path_ = m.out_dir / (stem + ".episodes.csv");
        csv_.open(csv_path_);
        csv_ << kEpisodeCsvHeader << '\n';
        check(csv_, csv_path_.string());
        if (m.trace) {
            trace_path_ = m.out_dir / (stem + ".trace.jsonl");
            trace_.open(trace_path_);
            check(trace_, trace_path_.string());
        }
    }

    void write(const Slot& slot) {
        if (!csv_.is_open()) {
            return;
        }
        csv_ << serialize_row(slot.row) << '\n';
        csv_.flush();
        check(csv_, csv_path_.string());
        if (trace_.is_open()) {
            trace_ << slot.trace;
            check(trace_, trace_path_.string());
        }
    }

private:
    static void check(const std::ostream& os, const std::string& what) {
        if (!os) {
            throw std::runtime_error(fmt::format("I/O error writing '{}'", what));
        }
    }

    std::filesystem::path csv_path_;
    std::filesystem::path trace_path_;
    std::ofstream csv_;
    std::ofstream trace_;
};

}  // namespace

std::vector<EpisodeRow> run_experiment(const ExperimentManifest& m) {
    validate(m.config);
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < m.config.seeds.size(); ++s) {
        for (int e = 0; e < m.config.episodes; ++e) {
            jobs.push_back({s, e});
        }
    }

    OutputFiles files(m);
    std::filesystem::path frame_dir;
    if ((m.render || m.config.render_mode == RenderMode::rgb_array) && !m.out_dir.empty()) {
        frame_dir = m.out_dir / "frames";
        std::filesystem::create_directories(frame_dir);
    }
    // Fail on a bad policy spec before spawning anything.
    make_policy(m.policy, m.config);

    std::vector<EpisodeRow> rows;
    rows.reserve(jobs.size());
    const unsigned threads = std::max(1u, std::min<unsigned>(m.threads, static_cast<unsigned>(jobs.size())));

    if (threads == 1) {
        Environment env(m.config);
        auto policy = make_policy(m.policy, m.config);
        for (const Job& job : jobs) {
            Slot slot = play(m, env, *policy, job, frame_dir);
            files.write(slot);
            rows.push_back(slot.row);
        }
        return rows;
    }

    std::vector<std::optional<Slot>> slots(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex mu;
    std::condition_variable cv;
    std::exception_ptr failure;

    auto worker = [&] {
        try {
            Environment env(m.config);
            auto policy = make_policy(m.policy, m.config);
            while (!stop) {
                const std::size_t k = next.fetch_add(1);
                if (k >= jobs.size()) {
                    break;
                }
                Slot slot = play(m, env, *policy, jobs[k], frame_dir);
                std::lock_guard lock(mu);
                slots[k] = std::move(slot);
                cv.notify_all();
            }
        } catch (...) {
            std::lock_guard lock(mu);
            if (!failure) {
                failure = std::current_exception();
            }
            stop = true;
            cv.notify_all();
        }
    };

    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    try {
        // Writer: emits rows in job order as they become available.
        for (std::size_t k = 0; k < jobs.size(); ++k) {
            std::unique_lock lock(mu);
            cv.wait(lock, [&] { return slots[k].has_value() || failure; });
            if (!slots[k]) {
                break;
            }
            Slot slot = std::move(*slots[k]);
            slots[k].reset();
            lock.unlock();
            files.write(slot);
            rows.push_back(slot.row);
        }
    } catch (...) {
        stop = true;
        throw;
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
    return rows;
}

int policy_rank(const std::string& policy) {
    if (policy == "stationary") return 0;
    if (policy == "random") return 1;
    if (policy == "greedy") return 2;
    return 3;
}

namespace {

std::vector<std::string> ordered_policies(const std::map<std::string, SampleSet>& durations) {
    std::vector<std::string> names;
    for (const auto& [name, _] : durations) {
        names.push_back(name);
    }
    std::stable_sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
        const int ra = policy_rank(a);
        const int rb = policy_rank(b);
        return ra != rb ? ra < rb : a < b;
    });
    return names;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_pairs(std::string_view spec,
                                                            const std::vector<std::string>& policies) {
    std::vector<std::pair<std::string, std::string>> out;
    if (spec == "all") {
        for (std::size_t i = 0; i < policies.size(); ++i) {
            for (std::size_t j = i + 1; j < policies.size(); ++j) {
                out.emplace_back(policies[i], policies[j]);
            }
        }
        return out;
    }
    const std::set<std::string> known(policies.begin(), policies.end());
    std::string_view rest = spec;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw ConfigError(fmt::format("pair '{}' must look like a:b", item));
        }
        std::string a(item.substr(0, colon));
        std::string b(item.substr(colon + 1));
        for (const auto& p : {a, b}) {
            if (!known.contains(p)) {
                throw ConfigError(fmt::format("pair '{}' names unknown policy '{}'", item, p));
            }
        }
        out.emplace_back(std::move(a), std::move(b));
        if (comma == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(comma + 1);
    }
    return out;
}

Report build_report(const std::map<std::string, SampleSet>& durations,
                    const std::map<std::string, double>& infections_per_step,
                    const std::vector<std::pair<std::string, std::string>>& pairs_in) {
    Report report;
    const auto names = ordered_policies(durations);
    for (const auto& name : names) {
        const SampleSet& set = durations.at(name);
        PolicySummary s;
        s.policy = name;
        s.episodes = set.size();
        s.mean_duration = set.mean();
        s.seed_means = set.seed_means();
        if (!s.seed_means.empty()) {
            s.ci = bootstrap_ci(s.seed_means, kBootstrapResamples, kConfidenceLevel);
        }
        if (const auto it = infections_per_step.find(name); it != infections_per_step.end()) {
            s.mean_infections_per_step = it->second;
        }
        report.policies.push_back(std::move(s));
    }
    auto pairs = pairs_in;
    if (pairs.empty()) {
        pairs = parse_pairs("all", names);
    }
    for (const auto& [a, b] : pairs) {
        const auto pa = durations.at(a).pooled();
        const auto pb = durations.at(b).pooled();
        report.comparisons.push_back(compare_samples(a, pa, b, pb, pairs.size()));
    }
    return report;
}

Report report_from_dir(const std::filesystem::path& dir, std::string_view pairs_spec) {
    constexpr std::string_view kSuffix = ".episodes.csv";
    std::map<std::string, SampleSet> durations;
    std::map<std::string, double> rates;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.size() > kSuffix.size() && name.ends_with(kSuffix)) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        const std::string file = path.filename().string();
        const std::string policy = file.substr(0, file.size() - kSuffix.size());
        const auto rows = read_episode_csv(path);
        SampleSet set;
        std::map<std::uint64_t, std::size_t> seed_slot;
        double rate_sum = 0.0;
        for (const auto& r : rows) {
            auto [it, inserted] = seed_slot.emplace(r.seed, set.by_seed.size());
            if (inserted) {
                set.by_seed.emplace_back();
            }
            set.by_seed[it->second].push_back(r.duration);
            rate_sum += r.infections_per_step;
        }
        if (rows.empty()) {
            continue;
        }
        rates[policy] = rate_sum / static_cast<double>(rows.size());
        durations.emplace(policy, std::move(set));
    }
    if (durations.empty()) {
        throw std::runtime_error(fmt::format("no *.episodes.csv files in '{}'", dir.string()));
    }
    const auto pairs = parse_pairs(pairs_spec, ordered_policies(durations));
    return build_report(durations, rates, pairs);
}

namespace {

std::string fmt_p(double p) {
    if (p >= 1.0) {
        return "1";
    }
    return fmt::format("{:.3g}", p);
}

}  // namespace

std::string comparisons_csv(const Report& report) {
    std::string out(kComparisonCsvHeader);
    out += '\n';
    for (const auto& c : report.comparisons) {
        out += fmt::format("{},{},{},{},{},{},{},{}\n", c.agent_a, c.agent_b, c.p_two_sided,
                           c.p_one_sided, significance_code(c.p_two_sided), c.p_one_sided_corrected,
                           significance_code(c.p_one_sided_corrected), c.winner.value_or("--"));
    }
    return out;
}

std::string summary_csv(const Report& report) {
    std::string out = "policy,episodes,mean_duration,ci_lo,ci_hi,seed_means,mean_infections_per_step\n";
    for (const auto& s : report.policies) {
        out += fmt::format("{},{},{},{},{},{},{}\n", s.policy, s.episodes, s.mean_duration, s.ci.lo,
                           s.ci.hi, fmt::join(s.seed_means, ";"), s.mean_infections_per_step);
    }
    return out;
}

std::string report_text(const Report& report) {
    std::string out = fmt::format("{:<14} {:>8} {:>10} {:>21} {:>12}\n", "Policy", "Episodes",
                                  "Mean dur.", "95% CI (seed means)", "Inf./step");
    for (const auto& s : report.policies) {
        out += fmt::format("{:<14} {:>8} {:>10.2f} {:>21} {:>12.4f}\n", s.policy, s.episodes,
                           s.mean_duration, fmt::format("[{:.2f}, {:.2f}]", s.ci.lo, s.ci.hi),
                           s.mean_infections_per_step);
    }
    out += '\n';
    out += fmt::format("{:<14} {:<14} {:>12} {:>12} {:>7} {:>16} {:>7} {:<14}\n", "Agent A", "Agent B",
                       "p (2-sided)", "p (1-sided)", "Sig (2)", "Corrected p (1)", "Sig (1)", "Winner");
    for (const auto& c : report.comparisons) {
        out += fmt::format("{:<14} {:<14} {:>12} {:>12} {:>7} {:>16} {:>7} {:<14}\n", c.agent_a,
                           c.agent_b, fmt_p(c.p_two_sided), fmt_p(c.p_one_sided),
                           significance_code(c.p_two_sided), fmt_p(c.p_one_sided_corrected),
                           significance_code(c.p_one_sided_corrected), c.winner.value_or("--"));
    }
    return out;
}

}  // namespace contagion
