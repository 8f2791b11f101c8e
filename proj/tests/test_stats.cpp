#include <doctest.h>

#include <cmath>
#include <vector>

#include "contagion/rng.hpp"
#include "contagion/stats.hpp"
#include "oracles.hpp"

using namespace contagion;

TEST_CASE("mann-whitney small exact example") {
    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    const auto r = mann_whitney_u(a, b);
    CHECK(r.exact);
    CHECK(r.u_a == 0.0);
    CHECK(r.u_b == 9.0);
    CHECK(r.p_two_sided == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(r.p_less == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(r.p_greater == 1.0);
}

TEST_CASE("mann-whitney matches enumeration for every split up to 12") {
    Rng rng(99);
    for (std::size_t n = 2; n <= 12; ++n) {
        for (std::size_t na = 1; na < n; ++na) {
            for (int rep = 0; rep < 6; ++rep) {
                std::vector<double> a(na), b(n - na);
                // Even reps draw from a small alphabet so ties are common.
                const bool ties = rep % 2 == 0;
                for (auto* v : {&a, &b}) {
                    for (double& x : *v) {
                        x = ties ? static_cast<double>(rng.uniform_index(4)) : rng.normal(0, 1);
                    }
                }
                if (rep == 1) {
                    for (double& x : a) x += 1.5;
                }
                const auto ref = oracle::exact_mann_whitney(a, b);
                const auto got = mann_whitney_u(a, b);
                REQUIRE(got.u_a == ref.u_a);
                REQUIRE(got.u_a + got.u_b == static_cast<double>(na * (n - na)));
                if (got.degenerate) {
                    REQUIRE(got.p_two_sided == 1.0);
                    continue;
                }
                REQUIRE(got.exact);
                REQUIRE(std::abs(got.p_two_sided - ref.p_two_sided) < 1e-12);
                REQUIRE(std::abs(got.p_greater - ref.p_greater) < 1e-12);
                REQUIRE(std::abs(got.p_less - ref.p_less) < 1e-12);
            }
        }
    }
}

TEST_CASE("mann-whitney identical samples") {
    const std::vector<double> a(50, 7.0), b(60, 7.0);
    const auto r = mann_whitney_u(a, b);
    CHECK(r.degenerate);
    CHECK(r.p_two_sided == 1.0);
    const auto t = compare_samples("x", a, "y", b, 3);
    CHECK_FALSE(t.winner.has_value());
}

TEST_CASE("mann-whitney large shifted samples") {
    Rng rng(3);
    std::vector<double> a(300), b(300);
    for (double& x : a) x = rng.normal(0, 1) + 2.0;
    for (double& x : b) x = rng.normal(0, 1);
    const auto r = mann_whitney_u(a, b);
    CHECK_FALSE(r.exact);
    CHECK(r.p_greater < 1e-6);
    const auto t = compare_samples("a", a, "b", b, 3);
    CHECK(t.p_one_sided_corrected < 0.001);
    REQUIRE(t.winner.has_value());
    CHECK(*t.winner == "a");
    const auto flipped = compare_samples("b", b, "a", a, 3);
    CHECK(*flipped.winner == "a");
}

TEST_CASE("normal approximation is symmetric and in range") {
    Rng rng(4);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> a(20 + rng.uniform_index(30)), b(20 + rng.uniform_index(30));
        for (double& x : a) x = std::round(rng.normal(0, 1) * 3);
        for (double& x : b) x = std::round(rng.normal(0, 1) * 3 + 0.5);
        const auto ab = mann_whitney_u(a, b);
        const auto ba = mann_whitney_u(b, a);
        REQUIRE(ab.p_two_sided >= 0.0);
        REQUIRE(ab.p_two_sided <= 1.0);
        REQUIRE(ab.p_greater == doctest::Approx(ba.p_less).epsilon(1e-12));
        REQUIRE(ab.p_two_sided == doctest::Approx(ba.p_two_sided).epsilon(1e-12));
    }
}

TEST_CASE("bonferroni") {
    CHECK(bonferroni(0.05, 3) == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(bonferroni(0.5, 3) == 1.0);
    CHECK(bonferroni(0.02, 1) == 0.02);
    CHECK_THROWS_AS(bonferroni(0.1, 0), std::invalid_argument);
    for (double p = 0.0; p <= 1.0; p += 0.01) {
        CHECK(bonferroni(p, 4) >= p);
        CHECK(bonferroni(p, 4) <= 1.0);
    }
}

TEST_CASE("significance codes") {
    CHECK(significance_code(0.0005) == "***");
    CHECK(significance_code(0.005) == "**");
    CHECK(significance_code(0.03) == "*");
    CHECK(significance_code(0.5594) == "n.s.");
}

TEST_CASE("bootstrap confidence interval") {
    const std::vector<double> one{100};
    const auto c1 = bootstrap_ci(one, kBootstrapResamples, kConfidenceLevel);
    CHECK(c1.lo == 100.0);
    CHECK(c1.hi == 100.0);
    CHECK(c1.point == 100.0);

    const std::vector<double> three{90, 100, 110};
    const auto c3 = bootstrap_ci(three, kBootstrapResamples, kConfidenceLevel);
    CHECK(c3.point == doctest::Approx(100.0));
    CHECK(c3.lo >= 90.0);
    CHECK(c3.hi <= 110.0);
    CHECK(c3.lo <= 100.0);
    CHECK(c3.hi >= 100.0);
    CHECK(std::abs((100.0 - c3.lo) - (c3.hi - 100.0)) <= 1.0);

    const auto again = bootstrap_ci(three, kBootstrapResamples, kConfidenceLevel);
    CHECK(again.lo == c3.lo);
    CHECK(again.hi == c3.hi);
}

TEST_CASE("quantile_sorted") {
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(quantile_sorted(v, 0.0) == 1.0);
    CHECK(quantile_sorted(v, 1.0) == 4.0);
    CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
}

TEST_CASE("sample set") {
    SampleSet s{{{1, 2, 3}, {5, 7}}};
    CHECK(s.size() == 5);
    CHECK(s.pooled() == std::vector<double>{1, 2, 3, 5, 7});
    CHECK(s.seed_means() == std::vector<double>{2, 6});
    CHECK(s.mean() == doctest::Approx(3.6));
}

namespace {

EpisodeRecord record_with(std::size_t length, int infections_per, bool infected, bool truncated) {
    EpisodeRecord r;
    r.steps.resize(length);
    for (auto& s : r.steps) {
        s.new_infections = infections_per;
        s.reward = 0.5;
    }
    r.agent_infected = infected;
    r.truncated = truncated;
    return r;
}

}  // namespace

TEST_CASE("episode metrics") {
    const auto quiet = episode_metrics(record_with(512, 0, false, true));
    CHECK(quiet.duration == 512);
    CHECK(quiet.truncated);
    CHECK(quiet.infections_per_step == 0.0);
    CHECK(quiet.cumulative_reward == doctest::Approx(256.0));

    auto busy = record_with(100, 0, false, false);
    for (std::size_t k = 0; k < 50; ++k) busy.steps[k].new_infections = 1;
    const auto m = episode_metrics(busy);
    CHECK(m.total_infections == 50);
    CHECK(m.infections_per_step == doctest::Approx(0.5));

    const auto first = episode_metrics(record_with(1, 0, true, false));
    CHECK(first.length == 1);
    CHECK(first.duration == 0);

    const auto empty = episode_metrics(record_with(0, 0, false, false));
    CHECK(empty.duration == 0);
    CHECK(empty.infections_per_step == 0.0);
}
