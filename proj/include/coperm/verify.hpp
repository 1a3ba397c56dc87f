#pragma once

// The acceptance checks behind the `verify` command and the acceptance test
// binary. Every check is deterministic: instance generators run on fixed
// seeds and every threshold is a constant below.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coperm/bounds.hpp"
#include "coperm/bucketing.hpp"
#include "coperm/counts.hpp"
#include "coperm/euler.hpp"
#include "coperm/matching.hpp"
#include "coperm/sampler.hpp"
#include "coperm/template_weights.hpp"

namespace coperm {

struct CriterionResult {
    std::string name;
    bool pass;
    std::string detail;
};

// Regression fixtures: exact counts pinned from two independent permanent
// algorithms; the even-n entries also satisfy C(2n) = C0(n)^2 exactly.
inline const char* const kCountFixtures[23] = {
    "",  "1", "1", "3", "4", "28", "16", "256", "324", "3600", "3600",
    "129744", "63504", "3521232", "3459600", "60891840", "91240704",
    "8048712960", "3554067456", "425476094976", "320265446400",
    "12474417291264", "16417666704384"};

inline constexpr double kConstantMidpointPinned = 0.3772953462;  // 10 digits
inline constexpr double kConstantMidpointTol = 5e-10;
inline constexpr double kConstantWidthBound = 1e-5;
inline constexpr double kSamplerYieldBound = 0.90;
inline constexpr double kChernoffSlack = 0.01;

namespace verify_detail {

inline std::string yes_no(bool b) { return b ? "pass" : "FAIL"; }

inline CriterionResult counts_oracle() {
    CriterionResult out{"counts-oracle", true, ""};
    std::ostringstream detail;
    for (int n = 1; n <= kBruteForceMaxN; ++n) {
        const BigCount a = count_C(n);
        const BigCount b = brute_force_count(n, Variant::C);
        if (a != b) {
            out.pass = false;
            detail << "C(" << n << ") permanent " << a << " != brute " << b << "; ";
        }
    }
    for (int n = 1; n <= 22; ++n) {
        const BigCount expected(kCountFixtures[n]);
        const BigCount got = count_C(n);
        if (got != expected) {
            out.pass = false;
            detail << "C(" << n << ") = " << got << " != fixture " << expected << "; ";
        }
    }
    if (out.pass) detail << "permanent = brute force on n <= 9; C(1..22) match fixtures";
    out.detail = detail.str();
    return out;
}

inline CriterionResult count_identities() {
    CriterionResult out{"count-identities", true, ""};
    std::ostringstream detail;
    for (int n = 1; n <= 10; ++n) {
        const BigCount lhs = count_C(2 * n);
        const BigCount c0 = count_C0(n);
        if (lhs != c0 * c0) {
            out.pass = false;
            detail << "C(" << 2 * n << ") != C0(" << n << ")^2; ";
        }
    }
    for (int n = 2; n <= 9; ++n) {
        const BigCount lhs = count_C(2 * n + 1);
        const BigCount c0 = count_C0(n - 1);
        if (lhs < 2 * c0 * c0) {
            out.pass = false;
            detail << "C(" << 2 * n + 1 << ") < 2 C0(" << n - 1 << ")^2; ";
        }
    }
    if (out.pass) detail << "square identity (n <= 10) and odd inequality (n <= 9) hold";
    out.detail = detail.str();
    return out;
}

inline CriterionResult constant_bracket() {
    CriterionResult out{"constant-bracket", true, ""};
    const Interval c = limit_constant(1000000);
    std::ostringstream detail;
    detail.precision(12);
    const double mid = c.mid();
    const bool width_ok = c.width() <= kConstantWidthBound;
    const bool bracket_ok = mid > 1.0 / 3.73 && mid < 1.0 / 2.5;
    const bool pinned_ok = std::abs(mid - kConstantMidpointPinned) <= kConstantMidpointTol;
    out.pass = width_ok && bracket_ok && pinned_ok;
    detail << "mid=" << mid << " width=" << c.width()
           << (width_ok ? "" : " width>1e-5") << (bracket_ok ? "" : " outside bracket")
           << (pinned_ok ? "" : " regression drift");
    out.detail = detail.str();
    return out;
}

inline CriterionResult euler_tail() {
    CriterionResult out{"euler-tail", true, ""};
    std::int64_t failures = 0;
    for (std::int64_t p : sieve_primes(100000)) {
        if (p == 2) continue;
        const Interval f = euler_factor(p);
        const double floor_bound = 1.0 - 3.0 / (static_cast<double>(p) * static_cast<double>(p));
        if (!(f.lo >= floor_bound && f.hi < 1.0)) ++failures;
    }
    out.pass = failures == 0;
    std::ostringstream detail;
    if (out.pass)
        detail << "1 - 3/p^2 <= f(p) < 1 for all odd primes p <= 1e5";
    else
        detail << failures << " primes violate the tail bounds";
    out.detail = detail.str();
    return out;
}

inline CriterionResult bucket_pie() {
    CriterionResult out{"bucket-pie", true, ""};
    Rng rng(0x70696531ULL);
    const std::vector<std::int64_t> primes50 = sieve_primes(50);
    std::ostringstream detail;
    for (int t = 0; t < 100 && out.pass; ++t) {
        const std::int64_t n = 100 + static_cast<std::int64_t>(rng.below(999901));
        std::vector<std::int64_t> basis;
        for (std::int64_t p : primes50)
            if (rng.bernoulli(0.5)) basis.push_back(p);
        const int k = 1 + static_cast<int>(rng.below(5));
        const BucketPartition part = partition(Domain::interval(n), basis, k);
        if (part.total_members() != n) {
            out.pass = false;
            detail << "instance " << t << ": partition does not cover the domain";
            break;
        }
        std::vector<BucketKey> keys{kEmptyKey};
        for (std::size_t i = 0; i < basis.size(); ++i) keys.push_back(1ULL << i);
        for (const auto& [key, members] : part.buckets) keys.push_back(key);
        for (BucketKey key : keys) {
            if (std::popcount(key) >= k) continue;
            auto it = part.buckets.find(key);
            const std::int64_t scanned =
                it == part.buckets.end() ? 0 : static_cast<std::int64_t>(it->second.size());
            if (pie_bucket_size(n, key, basis) != scanned) {
                out.pass = false;
                detail << "instance " << t << ": PIE != scan for key "
                       << key_to_string(key, basis);
                break;
            }
        }
    }
    if (out.pass) detail << "PIE = scan and partition totals on 100 random instances";
    out.detail = detail.str();
    return out;
}

inline CriterionResult matching_bound() {
    CriterionResult out{"matching-bound", true, ""};
    Rng rng(0x6d626e64ULL);
    std::ostringstream detail;
    for (int t = 0; t < 200 && out.pass; ++t) {
        const int n = 3 + static_cast<int>(rng.below(10));
        const int cap = n / 3;
        BipartiteGraph g = BipartiteGraph::complete(n, n);
        std::vector<std::pair<int, int>> edges;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) edges.push_back({r, c});
        rng.shuffle(edges);
        const double q = 0.1 + 0.5 * rng.unit();
        std::vector<int> miss_l(static_cast<std::size_t>(n), 0);
        std::vector<int> miss_r(static_cast<std::size_t>(n), 0);
        for (const auto& [r, c] : edges) {
            if (miss_l[static_cast<std::size_t>(r)] < cap &&
                miss_r[static_cast<std::size_t>(c)] < cap && rng.bernoulli(q)) {
                g.adj.set(r, c, false);
                ++miss_l[static_cast<std::size_t>(r)];
                ++miss_r[static_cast<std::size_t>(c)];
            }
        }
        const int delta = complement_max_degree(g);
        const int k = n - 2 * delta;
        const double exact = permanent(g.adj).get_d();
        const double bound = matching_count_lower_bound(n, delta);
        if (!(exact >= bound)) {
            out.pass = false;
            detail << "instance " << t << ": permanent " << exact << " < bound " << bound;
            break;
        }
        const auto factor = find_k_factor(g, k);
        if (!factor) {
            out.pass = false;
            detail << "instance " << t << ": no " << k << "-factor (n=" << n
                   << ", delta=" << delta << ")";
            break;
        }
        for (int v = 0; v < n; ++v) {
            if (factor->row_degree(v) != k || factor->col_degree(v) != k) {
                out.pass = false;
                detail << "instance " << t << ": factor degree != k";
                break;
            }
        }
    }
    if (out.pass)
        detail << "permanent >= ((n-2d)/e)^n and (n-2d)-factor found on 200 instances";
    out.detail = detail.str();
    return out;
}

inline CriterionResult chernoff_soundness() {
    CriterionResult out{"chernoff", true, ""};
    std::ostringstream detail;
    const int trials = 100000;
    const double means[] = {10.0, 100.0, 1000.0};
    const double deltas[] = {0.1, 0.5, 1.0, 2.0};
    std::mt19937_64 gen(0x636865ULL);
    for (double mean : means) {
        // Binomial: N = 10 * mean draws with success probability 0.1.
        const int draws = static_cast<int>(10 * mean);
        std::binomial_distribution<int> binom(draws, 0.1);
        std::vector<int> samples(trials);
        for (int i = 0; i < trials; ++i) samples[static_cast<std::size_t>(i)] = binom(gen);
        for (double delta : deltas) {
            const long long threshold = std::llround((1.0 + delta) * mean);
            long long hits = 0;
            for (int x : samples)
                if (x >= threshold) ++hits;
            const double freq = static_cast<double>(hits) / trials;
            const double bound = chernoff_tail(mean, delta);
            if (freq > bound + kChernoffSlack) {
                out.pass = false;
                detail << "binomial mean=" << mean << " delta=" << delta << " freq=" << freq
                       << " > bound+slack; ";
            }
        }
        // Hypergeometric: 2*mean draws without replacement from a half-good
        // population of size 8*mean.
        const std::int64_t population = static_cast<std::int64_t>(8 * mean);
        const std::int64_t good = population / 2;
        const std::int64_t draw_count = static_cast<std::int64_t>(2 * mean);
        for (int i = 0; i < trials; ++i) {
            std::int64_t rem_pop = population, rem_good = good, x = 0;
            for (std::int64_t d = 0; d < draw_count; ++d) {
                const std::int64_t pick =
                    std::uniform_int_distribution<std::int64_t>(0, rem_pop - 1)(gen);
                if (pick < rem_good) {
                    ++x;
                    --rem_good;
                }
                --rem_pop;
            }
            samples[static_cast<std::size_t>(i)] = static_cast<int>(x);
        }
        for (double delta : deltas) {
            const long long threshold = std::llround((1.0 + delta) * mean);
            long long hits = 0;
            for (int x : samples)
                if (x >= threshold) ++hits;
            const double freq = static_cast<double>(hits) / trials;
            const double bound = chernoff_tail(mean, delta);
            if (freq > bound + kChernoffSlack) {
                out.pass = false;
                detail << "hypergeometric mean=" << mean << " delta=" << delta
                       << " freq=" << freq << " > bound+slack; ";
            }
        }
    }
    if (out.pass)
        detail << "empirical tails within bound+0.01 on the full (mean, delta) grid";
    out.detail = detail.str();
    return out;
}

inline CriterionResult sampler_yield() {
    CriterionResult out{"sampler-yield", true, ""};
    const std::vector<std::int64_t> basis{3, 5, 7, 11};
    int successes = 0;
    std::ostringstream detail;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const SampleResult res = sample_coprime_bijection(5000, basis, 3, seed, 20);
        if (!res.success()) continue;
        if (!validate_coprime(odd_map_pairs(res.outcome->f))) {
            out.pass = false;
            detail << "seed " << seed << " produced an invalid bijection; ";
            continue;
        }
        ++successes;
    }
    const double rate = successes / 100.0;
    if (rate < kSamplerYieldBound) out.pass = false;
    detail << "success rate " << rate << " (bound " << kSamplerYieldBound
           << "), all successes coprime-valid";
    out.detail = detail.str();
    return out;
}

inline CriterionResult template_structure() {
    CriterionResult out{"template-structure", true, ""};
    Rng rng(0x74656d70ULL);
    const std::vector<std::int64_t> odd_primes{3, 5, 7, 11, 13, 17, 19, 23, 29};
    std::ostringstream detail;
    for (int t = 0; t < 50 && out.pass; ++t) {
        const std::int64_t n = 50 + static_cast<std::int64_t>(rng.below(1951));
        std::vector<std::int64_t> basis;
        for (std::int64_t p : odd_primes)
            if (rng.bernoulli(0.4)) basis.push_back(p);
        const int k = 2 + static_cast<int>(rng.below(2));
        const BucketPartition left = partition(Domain::interval(n), basis, k);
        const BucketPartition right = partition(Domain::odd_interval(n), basis, k);
        Rng draw_rng(derive_seed(0x74656d70ULL, static_cast<std::uint64_t>(t)));
        const AssignmentResult ar = random_assignment(left, right, draw_rng);

        // Label-disjointness and per-pair recounts, left side.
        std::map<std::pair<BucketKey, BucketKey>, std::int64_t> recount_l, recount_r;
        std::int64_t stars_l = 0, stars_r = 0;
        for (const auto& [s, members] : left.buckets) {
            std::int64_t bucket_stars = 0;
            std::map<BucketKey, std::int64_t> by_label;
            for (std::int64_t m : members) {
                const BucketKey label = ar.assignment.label_left(m);
                if (label == kStarLabel) {
                    ++bucket_stars;
                    continue;
                }
                if ((label & s) != 0 || std::popcount(label) >= k) {
                    out.pass = false;
                    detail << "instance " << t << ": invalid left label";
                    break;
                }
                ++recount_l[{s, label}];
                ++by_label[label];
            }
            stars_l += bucket_stars;
            // Conservation within the bucket.
            std::int64_t assigned = 0;
            for (const auto& [label, cnt] : by_label) assigned += cnt;
            if (assigned + bucket_stars != static_cast<std::int64_t>(members.size())) {
                out.pass = false;
                detail << "instance " << t << ": left conservation broken";
            }
        }
        stars_l += static_cast<std::int64_t>(left.overflow.size());
        for (const auto& [s, members] : right.buckets) {
            for (std::int64_t m : members) {
                const BucketKey label = ar.assignment.label_right(m);
                if (label == kStarLabel) {
                    ++stars_r;
                    continue;
                }
                if ((label & s) != 0 || std::popcount(label) >= k) {
                    out.pass = false;
                    detail << "instance " << t << ": invalid right label";
                    break;
                }
                ++recount_r[{label, s}];
            }
        }
        stars_r += static_cast<std::int64_t>(right.overflow.size());
        if (!out.pass) break;

        // Exact balance: recounts agree with each other and with the table.
        if (recount_l != recount_r) {
            out.pass = false;
            detail << "instance " << t << ": pair counts differ between sides";
            break;
        }
        for (const auto& [key, cnt] : recount_l) {
            if (ar.weights.beta_of(key.first, key.second) != cnt) {
                out.pass = false;
                detail << "instance " << t << ": beta table mismatch";
                break;
            }
        }
        if (stars_l != ar.weights.star1 || stars_r != ar.weights.star2) {
            out.pass = false;
            detail << "instance " << t << ": star masses mismatch";
            break;
        }
    }
    if (out.pass)
        detail << "label-disjointness, exact balance, conservation on 50 instances";
    out.detail = detail.str();
    return out;
}

inline CriterionResult convergence() {
    CriterionResult out{"convergence", true, ""};
    std::ostringstream detail;
    detail.precision(10);
    const auto rows = convergence_table(22);
    for (const auto& row : rows) {
        if (!(std::isfinite(row.rate) && row.rate > 0.0 && row.rate <= 1.0)) {
            out.pass = false;
            detail << "r_" << row.n << " out of (0,1]; ";
        }
        if (row.count != BigCount(kCountFixtures[row.n])) {
            out.pass = false;
            detail << "C(" << row.n << ") drifted from fixture; ";
        }
    }
    if (out.pass)
        detail << "r_n in (0,1] for n <= 22; trajectory matches fixtures; r_22="
               << rows.back().rate;
    out.detail = detail.str();
    return out;
}

}  // namespace verify_detail

/// Names accepted by the `--only` filter, in execution order.
inline std::vector<std::string> acceptance_names() {
    return {"counts-oracle",   "count-identities", "constant-bracket", "euler-tail",
            "bucket-pie",      "matching-bound",   "chernoff",         "sampler-yield",
            "template-structure", "convergence"};
}

/// Run the acceptance criteria; `only` (if nonempty) selects by name.
inline std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& only = {}) {
    using Runner = CriterionResult (*)();
    const std::vector<std::pair<std::string, Runner>> table = {
        {"counts-oracle", &verify_detail::counts_oracle},
        {"count-identities", &verify_detail::count_identities},
        {"constant-bracket", &verify_detail::constant_bracket},
        {"euler-tail", &verify_detail::euler_tail},
        {"bucket-pie", &verify_detail::bucket_pie},
        {"matching-bound", &verify_detail::matching_bound},
        {"chernoff", &verify_detail::chernoff_soundness},
        {"sampler-yield", &verify_detail::sampler_yield},
        {"template-structure", &verify_detail::template_structure},
        {"convergence", &verify_detail::convergence},
    };
    std::vector<CriterionResult> results;
    for (const auto& [name, runner] : table) {
        if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
        results.push_back(runner());
    }
    return results;
}

}  // namespace coperm
