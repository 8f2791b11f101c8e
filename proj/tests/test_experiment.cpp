#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "contagion/experiment.hpp"
#include "contagion/render.hpp"
#include "support.hpp"

using namespace contagion;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("contagion_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SimConfig small_config() {
    SimConfig c;
    c.seeds = {0, 1};
    c.episodes = 4;
    c.simulation_time = 64;
    return c;
}

}  // namespace

TEST_CASE("episode rows round trip") {
    Rng rng(6);
    for (int k = 0; k < 1000; ++k) {
        EpisodeRow r{rng.next_u64(), static_cast<int>(rng.uniform_index(1000)),
                     static_cast<int>(rng.uniform_index(513)), rng.uniform01() < 0.5,
                     rng.normal(0, 1) * 100, static_cast<int>(rng.uniform_index(5000)), rng.uniform01()};
        REQUIRE(parse_row(serialize_row(r)) == r);
    }
    CHECK_THROWS(parse_row("1,2,3"));
}

TEST_CASE("experiment output is deterministic") {
    for (const char* policy : {"stationary", "random", "greedy"}) {
        ExperimentManifest m{small_config(), policy, scratch("det_a"), true, false, 1};
        run_experiment(m);
        ExperimentManifest n = m;
        n.out_dir = scratch("det_b");
        run_experiment(n);
        const std::string stem = output_stem(m);
        CHECK(slurp(m.out_dir / (stem + ".episodes.csv")) == slurp(n.out_dir / (stem + ".episodes.csv")));
        CHECK(slurp(m.out_dir / (stem + ".trace.jsonl")) == slurp(n.out_dir / (stem + ".trace.jsonl")));

        ExperimentManifest par = m;
        par.out_dir = scratch("det_par");
        par.threads = 3;
        run_experiment(par);
        CHECK(slurp(m.out_dir / (stem + ".episodes.csv")) == slurp(par.out_dir / (stem + ".episodes.csv")));
        CHECK(read_episode_csv(m.out_dir / (stem + ".episodes.csv")).size() == 8);
    }
}

TEST_CASE("minimal and full-size runs") {
    SimConfig one;
    one.seeds = {7};
    one.episodes = 1;
    const auto rows = run_experiment({one, "stationary", {}, false, false, 1});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].seed == 7);
    CHECK(rows[0].episode == 0);

    SimConfig full;
    full.simulation_time = 32;
    const auto many = run_experiment({full, "stationary", {}, false, false, 1});
    CHECK(many.size() == 300);
    CHECK(many.back().seed == 2);
    CHECK(many.back().episode == 99);
}

TEST_CASE("rendered frames") {
    SimConfig c;
    c.seeds = {3};
    c.episodes = 1;
    c.simulation_time = 5;
    c.infection_rate = 0.0;
    ExperimentManifest m{c, "random", scratch("frames"), false, true, 1};
    const auto rows = run_experiment(m);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].duration == 5);
    int frames = 0;
    for (const auto& e : fs::directory_iterator(m.out_dir / "frames")) {
        CHECK(e.path().extension() == ".ppm");
        ++frames;
    }
    CHECK(frames == 5);
    const Image img = read_ppm(m.out_dir / "frames" / "random_s3_e0_t0005.ppm");
    CHECK(img.width == 400);
    CHECK(img.height == 400);
}

TEST_CASE("frame contents") {
    auto w = testing::world_with(50, {25, 25},
                                 {{{5, 5}, Compartment::D}, {{40, 10}, Compartment::D}});
    const Image img = render_frame(w);
    const auto a = pixel_of(w.agent.position, 50, 8);
    CHECK(img.at(a[0], a[1]) == kColorAgent);
    const auto d = pixel_of({5, 5}, 50, 8);
    CHECK(img.at(d[0], d[1]) == compartment_color(Compartment::D));
    const auto path = scratch("frame.ppm");
    write_ppm(path, img);
    const Image back = read_ppm(path);
    CHECK(back.width == img.width);
    CHECK(back.rgb == img.rgb);
}

TEST_CASE("report matches the comparison table layout") {
    const fs::path dir = scratch("report");
    SimConfig c = small_config();
    for (const char* policy : {"greedy", "stationary", "random"}) {
        run_experiment({c, policy, dir, false, false, 1});
    }
    const Report r = report_from_dir(dir);
    REQUIRE(r.policies.size() == 3);
    CHECK(r.policies[0].policy == "stationary");
    CHECK(r.policies[1].policy == "random");
    CHECK(r.policies[2].policy == "greedy");
    REQUIRE(r.comparisons.size() == 3);
    CHECK(r.comparisons[0].agent_a == "stationary");
    CHECK(r.comparisons[0].agent_b == "random");
    const std::string csv = comparisons_csv(r);
    CHECK(csv.substr(0, csv.find('\n')) == kComparisonCsvHeader);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

    const Report just = report_from_dir(dir, "stationary:greedy");
    REQUIRE(just.comparisons.size() == 1);
    CHECK_THROWS(report_from_dir(dir, "stationary:nobody"));
}
