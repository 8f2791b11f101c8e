// Command-line driver: batch episode runs and statistical reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "contagion/config.hpp"
#include "contagion/errors.hpp"
#include "contagion/experiment.hpp"

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    if (!out) {
        throw std::runtime_error(fmt::format("I/O error writing '{}'", path.string()));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial SIRS+D epidemic environment: batch runs and reports"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run seeds x episodes of a policy and log one CSV row per episode");
    std::string config_path;
    contagion::ExperimentManifest manifest;
    std::string out_dir;
    unsigned threads = 1;
    run->add_option("--config", config_path, "key = value configuration file");
    run->add_option("--policy", manifest.policy, "stationary | random | greedy | replay:<actions-file>")
        ->capture_default_str();
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_flag("--trace", manifest.trace, "Also write per-step JSON lines");
    run->add_flag("--render", manifest.render, "Dump one PPM frame per step");
    run->add_option("--threads", threads, "Worker threads")->capture_default_str();
    std::map<std::string, std::string> overrides;
    for (const auto& key : contagion::config_keys()) {
        run->add_option_function<std::string>(
               "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; },
               "Override " + key)
            ->group("Configuration overrides");
    }

    auto* report = app.add_subcommand("report", "Summarize *.episodes.csv files in a directory");
    std::string in_dir;
    std::string pairs = "all";
    report->add_option("--in", in_dir, "Directory written by `run`")->required();
    report->add_option("--pairs", pairs, "all, or a list like stationary:greedy,random:greedy")
        ->capture_default_str();

    auto* defaults = app.add_subcommand("defaults", "Print the default configuration");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*defaults) {
            std::cout << contagion::to_text(contagion::SimConfig{});
            return 0;
        }
        if (*run) {
            contagion::SimConfig config =
                config_path.empty() ? contagion::SimConfig{} : contagion::load_config(config_path);
            contagion::apply_env_overrides(config);
            for (const auto& [key, value] : overrides) {
                contagion::set_config_value(config, key, value);
            }
            contagion::validate(config);
            manifest.config = config;
            manifest.out_dir = out_dir;
            manifest.threads = threads;
            const auto rows = contagion::run_experiment(manifest);
            double total = 0.0;
            for (const auto& r : rows) {
                total += r.duration;
            }
            std::cout << fmt::format("{}: {} episodes, mean duration {:.2f}, written to {}\n",
                                     contagion::output_stem(manifest), rows.size(),
                                     rows.empty() ? 0.0 : total / static_cast<double>(rows.size()),
                                     out_dir);
            return 0;
        }
        if (*report) {
            const auto rep = contagion::report_from_dir(in_dir, pairs);
            const std::filesystem::path dir(in_dir);
            write_file(dir / "report_pairs.csv", contagion::comparisons_csv(rep));
            write_file(dir / "report_summary.csv", contagion::summary_csv(rep));
            const std::string text = contagion::report_text(rep);
            write_file(dir / "report.txt", text);
            std::cout << text;
            return 0;
        }
    } catch (const contagion::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
