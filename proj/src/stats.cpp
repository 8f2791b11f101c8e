#include "contagion/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "contagion/rng.hpp"

namespace contagion {

std::vector<double> SampleSet::pooled() const {
    std::vector<double> out;
    for (const auto& s : by_seed) {
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

std::vector<double> SampleSet::seed_means() const {
    std::vector<double> out;
    for (const auto& s : by_seed) {
        if (!s.empty()) {
            out.push_back(std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size()));
        }
    }
    return out;
}

double SampleSet::mean() const {
    const auto all = pooled();
    return all.empty() ? 0.0 : std::accumulate(all.begin(), all.end(), 0.0) / static_cast<double>(all.size());
}

std::size_t SampleSet::size() const {
    std::size_t n = 0;
    for (const auto& s : by_seed) {
        n += s.size();
    }
    return n;
}

double MannWhitneyResult::p(Alternative alt) const {
    switch (alt) {
        case Alternative::two_sided: return p_two_sided;
        case Alternative::greater: return p_greater;
        case Alternative::less: return p_less;
    }
    return p_two_sided;
}

namespace {

struct Ranked {
    /// Twice the midrank of each pooled value, in input order (a first, then b).
    std::vector<std::int64_t> doubled_ranks;
    /// Sum over tie groups of t^3 - t.
    double tie_term = 0.0;
    bool all_tied = false;
};

Ranked rank_pooled(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size() + b.size();
    std::vector<double> values(a.begin(), a.end());
    values.insert(values.end(), b.begin(), b.end());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });

    Ranked out;
    out.doubled_ranks.resize(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        // 1-based positions i+1 .. j+1 share midrank (i + j + 2) / 2.
        const auto doubled = static_cast<std::int64_t>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) {
            out.doubled_ranks[order[k]] = doubled;
        }
        const auto t = static_cast<double>(j - i + 1);
        out.tie_term += t * t * t - t;
        i = j + 1;
    }
    out.all_tied = n > 0 && out.tie_term == static_cast<double>(n) * n * n - n;
    return out;
}

double upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Exact null: distribution of the doubled rank sum over all subsets of size k
// drawn from `ranks`, by subset-sum dynamic programming.
std::vector<long double> subset_sum_counts(std::span<const std::int64_t> ranks, std::size_t k,
                                           std::int64_t max_sum) {
    const auto width = static_cast<std::size_t>(max_sum + 1);
    std::vector<long double> dp((k + 1) * width, 0.0L);
    dp[0] = 1.0L;
    std::size_t seen = 0;
    for (const std::int64_t r : ranks) {
        ++seen;
        for (std::size_t c = std::min(seen, k); c >= 1; --c) {
            long double* dst = dp.data() + c * width;
            const long double* src = dp.data() + (c - 1) * width;
            for (std::int64_t s = max_sum - r; s >= 0; --s) {
                dst[s + r] += src[s];
            }
        }
    }
    return {dp.begin() + static_cast<std::ptrdiff_t>(k * width), dp.end()};
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("mann_whitney_u needs two nonempty samples");
    }
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    const std::size_t n = na + nb;
    const Ranked ranked = rank_pooled(a, b);

    std::int64_t ra2 = 0;
    for (std::size_t k = 0; k < na; ++k) {
        ra2 += ranked.doubled_ranks[k];
    }
    const auto na_i = static_cast<std::int64_t>(na);
    const auto nb_i = static_cast<std::int64_t>(nb);
    // Doubled U keeps everything integral under midranks.
    const std::int64_t u2_a = ra2 - na_i * (na_i + 1);
    const std::int64_t nanb = na_i * nb_i;

    MannWhitneyResult res;
    res.u_a = static_cast<double>(u2_a) / 2.0;
    res.u_b = static_cast<double>(nanb) - res.u_a;
    if (ranked.all_tied) {
        res.degenerate = true;
        res.exact = std::min(na, nb) <= kExactSideLimit && n <= kExactPooledLimit;
        return res;
    }

    if (std::min(na, nb) <= kExactSideLimit && n <= kExactPooledLimit) {
        res.exact = true;
        // Enumerate the smaller group; its rank sum determines U_a.
        const bool use_a = na <= nb;
        const std::size_t k = use_a ? na : nb;
        std::vector<std::int64_t> sorted = ranked.doubled_ranks;
        std::sort(sorted.begin(), sorted.end());
        const std::int64_t max_sum =
            std::accumulate(sorted.end() - static_cast<std::ptrdiff_t>(k), sorted.end(), std::int64_t{0});
        const std::int64_t total2 = std::accumulate(sorted.begin(), sorted.end(), std::int64_t{0});
        const auto counts = subset_sum_counts(ranked.doubled_ranks, k, max_sum);

        long double all = 0, ge = 0, le = 0, extreme = 0;
        const std::int64_t obs_dev = std::abs(u2_a - nanb);
        for (std::int64_t s = 0; s <= max_sum; ++s) {
            const long double c = counts[static_cast<std::size_t>(s)];
            if (c == 0.0L) {
                continue;
            }
            const std::int64_t ra2_s = use_a ? s : total2 - s;
            const std::int64_t u2 = ra2_s - na_i * (na_i + 1);
            all += c;
            if (u2 >= u2_a) ge += c;
            if (u2 <= u2_a) le += c;
            if (std::abs(u2 - nanb) >= obs_dev) extreme += c;
        }
        res.p_greater = static_cast<double>(ge / all);
        res.p_less = static_cast<double>(le / all);
        res.p_two_sided = std::min(1.0, static_cast<double>(extreme / all));
        return res;
    }

    const double mu = static_cast<double>(nanb) / 2.0;
    const double nd = static_cast<double>(n);
    const double var = static_cast<double>(nanb) / 12.0 * ((nd + 1.0) - ranked.tie_term / (nd * (nd - 1.0)));
    const double sigma = std::sqrt(var);
    const double u = res.u_a;
    res.p_greater = upper_tail((u - mu - 0.5) / sigma);
    res.p_less = upper_tail((mu - u - 0.5) / sigma);
    res.p_two_sided = std::min(1.0, 2.0 * upper_tail((std::abs(u - mu) - 0.5) / sigma));
    return res;
}

double bonferroni(double p, std::size_t comparisons) {
    if (comparisons < 1) {
        throw std::invalid_argument("bonferroni needs at least one comparison");
    }
    return std::min(1.0, p * static_cast<double>(comparisons));
}

std::string_view significance_code(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "n.s.";
}

TestResult compare_samples(std::string agent_a, std::span<const double> a, std::string agent_b,
                           std::span<const double> b, std::size_t comparisons, double alpha) {
    const MannWhitneyResult mw = mann_whitney_u(a, b);
    const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
    const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(b.size());
    const bool a_leads = mean_a >= mean_b;

    TestResult r;
    r.u_statistic = mw.u_a;
    r.p_two_sided = mw.p_two_sided;
    r.p_one_sided = a_leads ? mw.p_greater : mw.p_less;
    r.p_one_sided_corrected = bonferroni(r.p_one_sided, comparisons);
    r.degenerate = mw.degenerate;
    if (!mw.degenerate && mean_a != mean_b && r.p_one_sided_corrected < alpha) {
        r.winner = a_leads ? agent_a : agent_b;
    }
    r.agent_a = std::move(agent_a);
    r.agent_b = std::move(agent_b);
    return r;
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of empty data");
    }
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ConfidenceInterval bootstrap_ci(std::span<const double> means, std::size_t n_resamples,
                                double level, std::uint64_t seed) {
    if (means.empty() || n_resamples < 1) {
        throw std::invalid_argument("bootstrap_ci needs at least one value and one resample");
    }
    const std::size_t n = means.size();
    ConfidenceInterval ci;
    ci.point = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(n);

    Rng rng(seed, Stream::bootstrap);
    std::vector<double> stats(n_resamples);
    for (auto& s : stats) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            sum += means[rng.uniform_index(n)];
        }
        s = sum / static_cast<double>(n);
    }
    std::sort(stats.begin(), stats.end());
    const double tail = (1.0 - level) / 2.0;
    ci.lo = quantile_sorted(stats, tail);
    ci.hi = quantile_sorted(stats, 1.0 - tail);
    return ci;
}

EpisodeSummary episode_metrics(const EpisodeRecord& record) {
    EpisodeSummary s;
    s.length = static_cast<int>(record.steps.size());
    s.truncated = record.truncated;
    if (s.length == 0) {
        return s;
    }
    s.duration = record.agent_infected ? s.length - 1 : s.length;
    for (const auto& step : record.steps) {
        s.cumulative_reward += step.reward;
        s.total_infections += step.new_infections;
    }
    s.infections_per_step = static_cast<double>(s.total_infections) / static_cast<double>(s.length);
    return s;
}

}  // namespace contagion
