#pragma once

// Generator of coprime bijections {1,3,...,2n-1} -> [n], and the lift of two
// of them to a coprime permutation of [2n].
//
// One attempt: fix a template assignment (labels phi on both sides), shuffle
// labels uniformly within every bucket (equivalent to composing phi with a
// uniform bucket-preserving permutation), route elements into pair cells
// (S1, S2) by (own key, shuffled label) with reserve-labeled elements going
// to the absorption pools R_B/R_C, then find a coprime perfect matching in
// every cell. The (empty, empty) cell absorbs both pools. The matching step
// is coprimality-constrained in every cell, including the absorption cell,
// so any produced bijection is valid by construction. If a cell has no
// perfect matching the shuffles are redrawn, and every third failure redraws
// the assignment as well.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coperm/bucketing.hpp"
#include "coperm/matching.hpp"
#include "coperm/rng.hpp"
#include "coperm/template_weights.hpp"

namespace coperm {

/// gcd(x, y) = 1 for every listed pair. Totality/injectivity of the
/// underlying map is the caller's precondition.
inline bool validate_coprime(const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs) {
    for (const auto& [x, y] : pairs)
        if (std::gcd(x, y) != 1) return false;
    return true;
}

/// Pairs (j, f(j)) of a map from the odd interval, f stored at index (j-1)/2.
inline std::vector<std::pair<std::int64_t, std::int64_t>>
odd_map_pairs(const std::vector<std::int64_t>& f) {
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    pairs.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        pairs.push_back({static_cast<std::int64_t>(2 * i + 1), f[i]});
    return pairs;
}

/// Pairs (m, sigma(m)) of a permutation stored at index m-1.
inline std::vector<std::pair<std::int64_t, std::int64_t>>
permutation_pairs(const std::vector<std::int64_t>& sigma) {
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    pairs.reserve(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i)
        pairs.push_back({static_cast<std::int64_t>(i + 1), sigma[i]});
    return pairs;
}

struct SamplerDiagnostics {
    struct PairCell {
        BucketKey s1;
        BucketKey s2;
        std::int64_t size;
    };
    std::vector<PairCell> cells;       // sizes in the final attempt (pool last)
    std::int64_t star_left = 0;        // |R_B|
    std::int64_t star_right = 0;       // |R_C|
    int attempts = 0;
    int assignment_redraws = 0;
    std::optional<std::pair<BucketKey, BucketKey>> failing_cell;
};

struct SampleOutcome {
    std::int64_t n = 0;
    std::vector<std::int64_t> f;       // index (j-1)/2 -> f(j) in [n]
    std::vector<std::int64_t> r_b;     // ascending subset of [n]
    std::vector<std::int64_t> r_c;     // ascending subset of the odd interval
    SamplerDiagnostics diagnostics;
};

struct SampleResult {
    std::optional<SampleOutcome> outcome;
    SamplerDiagnostics diagnostics;

    bool success() const { return outcome.has_value(); }
};

/// One coprime bijection {1,3,...,2n-1} -> [n]. Identical (n, basis, k,
/// seed, max_retries) give identical results.
inline SampleResult sample_coprime_bijection(std::int64_t n,
                                             const std::vector<std::int64_t>& basis,
                                             int k, std::uint64_t seed,
                                             int max_retries = 20) {
    if (n < 2) throw std::invalid_argument("sample_coprime_bijection: n must be >= 2");
    if (max_retries < 1)
        throw std::invalid_argument("sample_coprime_bijection: max_retries must be >= 1");
    detail::check_odd_basis(basis);

    const BucketPartition image_part = partition(Domain::interval(n), basis, k);
    const BucketPartition domain_part = partition(Domain::odd_interval(n), basis, k);

    Rng assignment_rng(derive_seed(seed, 0x617373696e6dULL));
    AssignmentResult assigned = random_assignment(image_part, domain_part, assignment_rng);

    SamplerDiagnostics diag;
    int failures = 0;

    for (int attempt = 1; attempt <= max_retries; ++attempt) {
        diag.attempts = attempt;
        diag.cells.clear();
        diag.failing_cell.reset();

        // Shuffle labels within each bucket, both sides.
        std::vector<BucketKey> left_labels = assigned.assignment.left_labels;
        std::vector<BucketKey> right_labels = assigned.assignment.right_labels;
        Rng shuffle_rng(derive_seed(seed, 0x73687566ULL, static_cast<std::uint64_t>(attempt)));
        auto shuffle_bucket_labels = [&](const BucketPartition& part,
                                         std::vector<BucketKey>& labels) {
            std::vector<BucketKey> scratch;
            for (const auto& [key, members] : part.buckets) {
                scratch.clear();
                for (std::int64_t m : members)
                    scratch.push_back(labels[Assignment::position(part.domain, m)]);
                shuffle_rng.shuffle(scratch);
                for (std::size_t i = 0; i < members.size(); ++i)
                    labels[Assignment::position(part.domain, members[i])] = scratch[i];
            }
        };
        shuffle_bucket_labels(image_part, left_labels);
        shuffle_bucket_labels(domain_part, right_labels);

        // Route elements into pair cells and the absorption pools.
        std::map<std::pair<BucketKey, BucketKey>, std::pair<std::vector<std::int64_t>,
                                                            std::vector<std::int64_t>>> cells;
        std::vector<std::int64_t> pool_b, pool_c;  // reserve-labeled elements
        for (const auto& [s1, members] : image_part.buckets) {
            for (std::int64_t m : members) {
                const BucketKey label = left_labels[Assignment::position(image_part.domain, m)];
                if (label == kStarLabel) pool_b.push_back(m);
                else cells[{s1, label}].first.push_back(m);
            }
        }
        for (std::int64_t m : image_part.overflow) pool_b.push_back(m);
        for (const auto& [s2, members] : domain_part.buckets) {
            for (std::int64_t m : members) {
                const BucketKey label = right_labels[Assignment::position(domain_part.domain, m)];
                if (label == kStarLabel) pool_c.push_back(m);
                else cells[{label, s2}].second.push_back(m);
            }
        }
        for (std::int64_t m : domain_part.overflow) pool_c.push_back(m);
        std::sort(pool_b.begin(), pool_b.end());
        std::sort(pool_c.begin(), pool_c.end());

        diag.star_left = static_cast<std::int64_t>(pool_b.size());
        diag.star_right = static_cast<std::int64_t>(pool_c.size());

        std::vector<std::int64_t> f(static_cast<std::size_t>(n), 0);
        bool ok = true;

        auto match_cell = [&](const std::vector<std::int64_t>& side_b,
                              const std::vector<std::int64_t>& side_c,
                              BucketKey s1, BucketKey s2) -> bool {
            Rng cell_rng(derive_seed(seed, static_cast<std::uint64_t>(attempt), s1 + 1, s2 + 2));
            auto matched = random_coprime_matching(side_b, side_c, cell_rng);
            if (!matched) {
                diag.failing_cell = {{s1, s2}};
                return false;
            }
            for (const auto& [b, c] : *matched)
                f[static_cast<std::size_t>((c - 1) / 2)] = b;
            return true;
        };

        for (const auto& [pair_key, sides] : cells) {
            if (pair_key == std::make_pair(kEmptyKey, kEmptyKey)) continue;
            if ((pair_key.first & pair_key.second) != 0)
                throw std::logic_error("sampler: overlapping cell should be impossible");
            if (sides.first.size() != sides.second.size())
                throw std::logic_error("sampler: unbalanced cell should be impossible");
            diag.cells.push_back({pair_key.first, pair_key.second,
                                  static_cast<std::int64_t>(sides.first.size())});
            if (!match_cell(sides.first, sides.second, pair_key.first, pair_key.second)) {
                ok = false;
                break;
            }
        }

        if (ok) {
            // Absorption cell: (empty, empty) plus both pools.
            auto empty_it = cells.find({kEmptyKey, kEmptyKey});
            std::vector<std::int64_t> side_b = pool_b, side_c = pool_c;
            if (empty_it != cells.end()) {
                side_b.insert(side_b.end(), empty_it->second.first.begin(),
                              empty_it->second.first.end());
                side_c.insert(side_c.end(), empty_it->second.second.begin(),
                              empty_it->second.second.end());
            }
            std::sort(side_b.begin(), side_b.end());
            std::sort(side_c.begin(), side_c.end());
            diag.cells.push_back({kEmptyKey, kEmptyKey,
                                  static_cast<std::int64_t>(side_b.size())});
            ok = match_cell(side_b, side_c, kEmptyKey, kEmptyKey);
        }

        if (ok) {
            SampleOutcome outcome;
            outcome.n = n;
            outcome.f = std::move(f);
            outcome.r_b = std::move(pool_b);
            outcome.r_c = std::move(pool_c);
            outcome.diagnostics = diag;
            if (!validate_coprime(odd_map_pairs(outcome.f)))
                throw std::logic_error("sampler: produced a non-coprime bijection");
            SampleResult result;
            result.diagnostics = outcome.diagnostics;
            result.outcome = std::move(outcome);
            return result;
        }

        ++failures;
        if (failures % 3 == 0 && attempt < max_retries) {
            assigned = random_assignment(image_part, domain_part, assignment_rng);
            ++diag.assignment_redraws;
        }
    }

    SampleResult result;
    result.diagnostics = diag;
    return result;
}

/// Interleave an even-side and an odd-side coprime bijection into a coprime
/// permutation of [2n]: sigma(2m) = f_even(m), sigma(j) = 2 f_odd(j) for odd
/// j. Validity transfers because gcd(2m, v) = gcd(m, v) for odd v and
/// gcd(j, 2t) = gcd(j, t) for odd j.
inline std::vector<std::int64_t> lift_to_permutation(const std::vector<std::int64_t>& f_even,
                                                     const std::vector<std::int64_t>& f_odd) {
    const std::int64_t n = static_cast<std::int64_t>(f_even.size());
    if (n < 1 || f_odd.size() != f_even.size())
        throw std::invalid_argument("lift_to_permutation: sides must be nonempty and equal");

    std::vector<bool> seen_even(static_cast<std::size_t>(n), false);
    std::vector<bool> seen_odd(static_cast<std::size_t>(n), false);
    for (std::int64_t m = 1; m <= n; ++m) {
        const std::int64_t v = f_even[static_cast<std::size_t>(m - 1)];
        if (v < 1 || v > 2 * n - 1 || v % 2 == 0)
            throw std::invalid_argument("lift_to_permutation: even side must map into the odd interval");
        if (seen_even[static_cast<std::size_t>((v - 1) / 2)])
            throw std::invalid_argument("lift_to_permutation: even side is not injective");
        seen_even[static_cast<std::size_t>((v - 1) / 2)] = true;
        if (std::gcd(m, v) != 1)
            throw std::invalid_argument("lift_to_permutation: even side is not coprime");
    }
    for (std::int64_t j = 1; j <= 2 * n - 1; j += 2) {
        const std::int64_t v = f_odd[static_cast<std::size_t>((j - 1) / 2)];
        if (v < 1 || v > n)
            throw std::invalid_argument("lift_to_permutation: odd side must map into [n]");
        if (seen_odd[static_cast<std::size_t>(v - 1)])
            throw std::invalid_argument("lift_to_permutation: odd side is not injective");
        seen_odd[static_cast<std::size_t>(v - 1)] = true;
        if (std::gcd(j, v) != 1)
            throw std::invalid_argument("lift_to_permutation: odd side is not coprime");
    }

    std::vector<std::int64_t> sigma(static_cast<std::size_t>(2 * n), 0);
    for (std::int64_t m = 1; m <= n; ++m)
        sigma[static_cast<std::size_t>(2 * m - 1)] = f_even[static_cast<std::size_t>(m - 1)];
    for (std::int64_t j = 1; j <= 2 * n - 1; j += 2)
        sigma[static_cast<std::size_t>(j - 1)] = 2 * f_odd[static_cast<std::size_t>((j - 1) / 2)];
    return sigma;
}

}  // namespace coperm
