#pragma once

// The entropy-maximizing template. For each prime p the divisibility pair
// (1_{p|m}, 1_{p|sigma(m)}) is supported on (0,0), (1,0), (0,1) with the two
// marginal masses floor(n/p)/n; the per-pair target rate over an odd basis is
//
//   n prod_{p in S1} 1/p prod_{p in S2} 1/p prod_{p in basis\(S1 u S2)} (1-2/p).
//
// random_assignment realizes the template on a concrete pair of partitions:
// provisional labels are drawn per element with exact rational probabilities
// (weight prod_{p in T} 1/(p-1) times prod_{p in basis\(S u T)} (1-1/(p-1)),
// the remainder to the reserve label), the per-pair count is fixed to the
// minimum of the two sides, and surplus elements are re-labeled to the
// reserve, largest values first, so both sides balance exactly.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "coperm/bucketing.hpp"
#include "coperm/rng.hpp"

namespace coperm {

/// The reserve label (written * in serialized output).
inline constexpr BucketKey kStarLabel = ~std::uint64_t{0};

/// Joint divisibility law of (1_{p|m}, 1_{p|sigma(m)}) for one prime.
struct ZpLaw {
    std::int64_t p;
    mpq_class p10;  // P[(1,0)]
    mpq_class p01;  // P[(0,1)]
    mpq_class p00;  // P[(0,0)]

    std::vector<double> probabilities() const {
        return {p10.get_d(), p01.get_d(), p00.get_d()};
    }
};

inline ZpLaw zp_law(std::int64_t p, std::int64_t n, bool allow_degenerate = false) {
    if (!is_prime(p)) throw std::invalid_argument("zp_law: p must be prime");
    if (n < 1) throw std::invalid_argument("zp_law: n must be >= 1");
    if (p > n) {
        if (!allow_degenerate) throw std::invalid_argument("zp_law: p exceeds n");
        return ZpLaw{p, 0, 0, 1};
    }
    const mpq_class marginal(n / p, n);
    ZpLaw law{p, marginal, marginal, 1 - 2 * marginal};
    law.p10.canonicalize();
    law.p01.canonicalize();
    law.p00.canonicalize();
    return law;
}

/// Shannon entropy in nats; entries must be nonnegative and sum to 1 within
/// 1e-12. 0 log 0 = 0.
inline double entropy(const std::vector<double>& dist) {
    double sum = 0.0;
    for (double q : dist) {
        if (q < 0.0) throw std::invalid_argument("entropy: negative probability");
        sum += q;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("entropy: probabilities must sum to 1");
    double h = 0.0;
    for (double q : dist)
        if (q > 0.0) h -= q * std::log(q);
    return h;
}

namespace detail {
inline void check_odd_basis(const std::vector<std::int64_t>& basis) {
    check_basis(basis);
    if (!basis.empty() && basis.front() == 2)
        throw std::invalid_argument("basis must exclude 2 (handled by the even/odd reduction)");
}
}  // namespace detail

/// Target pair rate for disjoint keys over an odd basis. Overlapping keys are
/// an error unless zero_on_overlap, in which case the rate is exactly 0.
inline double beta_target(BucketKey s1, BucketKey s2, std::int64_t n,
                          const std::vector<std::int64_t>& basis,
                          bool zero_on_overlap = false) {
    detail::check_odd_basis(basis);
    if (!detail::key_in_basis(s1, basis.size()) || !detail::key_in_basis(s2, basis.size()))
        throw std::invalid_argument("beta_target: key not within basis");
    if ((s1 & s2) != 0) {
        if (zero_on_overlap) return 0.0;
        throw std::invalid_argument("beta_target: keys must be disjoint");
    }
    double out = static_cast<double>(n);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const double p = static_cast<double>(basis[i]);
        if (((s1 | s2) >> i) & 1ULL)
            out *= 1.0 / p;
        else
            out *= 1.0 - 2.0 / p;
    }
    return out;
}

/// Element labels over a pair of partitioned domains. kStarLabel marks the
/// reserve; every other label is a bucket key disjoint from the element's
/// own key.
struct Assignment {
    Domain left_domain{DomainKind::Interval, 0};
    Domain right_domain{DomainKind::Interval, 0};
    std::vector<BucketKey> left_labels;   // indexed by domain position
    std::vector<BucketKey> right_labels;

    static std::size_t position(const Domain& dom, std::int64_t value) {
        return static_cast<std::size_t>(dom.kind == DomainKind::Interval ? value - 1
                                                                         : (value - 1) / 2);
    }
    BucketKey label_left(std::int64_t value) const {
        return left_labels[position(left_domain, value)];
    }
    BucketKey label_right(std::int64_t value) const {
        return right_labels[position(right_domain, value)];
    }
};

/// The balanced pair counts: beta(S1,S2) elements of left bucket S1 carry
/// label S2 and equally many elements of right bucket S2 carry label S1;
/// star1/star2 count reserve labels per side.
struct TemplateWeights {
    std::int64_t n = 0;
    std::map<std::pair<BucketKey, BucketKey>, std::int64_t> beta;
    std::int64_t star1 = 0;
    std::int64_t star2 = 0;

    std::int64_t beta_of(BucketKey s1, BucketKey s2) const {
        auto it = beta.find({s1, s2});
        return it == beta.end() ? 0 : it->second;
    }
    double rho(BucketKey s1, BucketKey s2) const {
        return static_cast<double>(beta_of(s1, s2)) / static_cast<double>(n);
    }
};

struct AssignmentResult {
    Assignment assignment;
    TemplateWeights weights;
};

namespace detail {

// Provisional label distribution for one source key: integer weights over
// valid labels T (|T| < k, T disjoint from S) with common denominator
// prod_{p in basis\S}(p-1); the remainder of the mass is the reserve.
struct LabelDistribution {
    std::vector<BucketKey> labels;
    std::vector<mpz_class> cumulative;
    mpz_class denom;
};

inline void collect_small_subsets(const std::vector<std::size_t>& indices, std::size_t from,
                                  BucketKey mask, int remaining,
                                  std::vector<BucketKey>& out) {
    out.push_back(mask);
    if (remaining == 0) return;
    for (std::size_t i = from; i < indices.size(); ++i)
        collect_small_subsets(indices, i + 1, mask | (1ULL << indices[i]), remaining - 1, out);
}

inline LabelDistribution build_label_distribution(BucketKey s,
                                                  const std::vector<std::int64_t>& basis,
                                                  int k) {
    std::vector<std::size_t> comp_idx;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (!((s >> i) & 1ULL)) comp_idx.push_back(i);

    LabelDistribution dist;
    dist.denom = 1;
    for (std::size_t i : comp_idx) dist.denom *= basis[i] - 1;

    collect_small_subsets(comp_idx, 0, 0, k - 1, dist.labels);
    std::sort(dist.labels.begin(), dist.labels.end());

    mpz_class running = 0;
    dist.cumulative.reserve(dist.labels.size());
    for (BucketKey t : dist.labels) {
        mpz_class w = 1;
        for (std::size_t i : comp_idx)
            if (!((t >> i) & 1ULL)) w *= basis[i] - 2;
        running += w;
        dist.cumulative.push_back(running);
    }
    return dist;
}

inline mpz_class mpz_below(Rng& rng, const mpz_class& bound) {
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    mpz_class v;
    while (true) {
        v = 0;
        for (std::size_t w = 0; w < words; ++w) {
            v <<= 64;
            v += static_cast<unsigned long>(rng.next());
        }
        mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
        if (v < bound) return v;
    }
}

inline BucketKey draw_label(const LabelDistribution& dist, Rng& rng) {
    const mpz_class r = mpz_below(rng, dist.denom);
    auto it = std::upper_bound(dist.cumulative.begin(), dist.cumulative.end(), r);
    if (it == dist.cumulative.end()) return kStarLabel;
    return dist.labels[static_cast<std::size_t>(it - dist.cumulative.begin())];
}

}  // namespace detail

/// Draw provisional labels for every element of both partitions, then
/// balance: beta(S1,S2) is the smaller of the two provisional pair counts
/// and surplus elements (largest values first) move to the reserve.
inline AssignmentResult random_assignment(const BucketPartition& left,
                                          const BucketPartition& right, Rng& rng) {
    if (left.basis != right.basis)
        throw std::invalid_argument("random_assignment: partitions must share a basis");
    if (left.k != right.k)
        throw std::invalid_argument("random_assignment: partitions must share k");
    detail::check_odd_basis(left.basis);

    const std::vector<std::int64_t>& basis = left.basis;
    const int k = left.k;

    AssignmentResult out;
    out.assignment.left_domain = left.domain;
    out.assignment.right_domain = right.domain;
    out.assignment.left_labels.assign(static_cast<std::size_t>(left.domain.n), kStarLabel);
    out.assignment.right_labels.assign(static_cast<std::size_t>(right.domain.n), kStarLabel);
    out.weights.n = left.domain.n;

    std::map<BucketKey, detail::LabelDistribution> dists;
    auto dist_for = [&](BucketKey s) -> const detail::LabelDistribution& {
        auto it = dists.find(s);
        if (it == dists.end())
            it = dists.emplace(s, detail::build_label_distribution(s, basis, k)).first;
        return it->second;
    };

    // Provisional pair counts, keyed (S1, S2) = (left bucket, right bucket).
    std::map<std::pair<BucketKey, BucketKey>, std::int64_t> count_left, count_right;
    for (const auto& [s1, members] : left.buckets) {
        const auto& dist = dist_for(s1);
        for (std::int64_t m : members) {
            const BucketKey label = detail::draw_label(dist, rng);
            out.assignment.left_labels[Assignment::position(left.domain, m)] = label;
            if (label != kStarLabel) ++count_left[{s1, label}];
        }
    }
    for (const auto& [s2, members] : right.buckets) {
        const auto& dist = dist_for(s2);
        for (std::int64_t m : members) {
            const BucketKey label = detail::draw_label(dist, rng);
            out.assignment.right_labels[Assignment::position(right.domain, m)] = label;
            if (label != kStarLabel) ++count_right[{label, s2}];
        }
    }

    // Balance each pair to the minimum of the two sides.
    for (const auto& [pair_key, c1] : count_left) {
        auto it = count_right.find(pair_key);
        const std::int64_t b = it == count_right.end() ? 0 : std::min(c1, it->second);
        if (b > 0) out.weights.beta[pair_key] = b;
    }

    auto trim_side = [&](const BucketPartition& part, std::vector<BucketKey>& labels,
                         bool left_side) {
        for (const auto& [s, members] : part.buckets) {
            // Per-label excess for this bucket.
            std::map<BucketKey, std::int64_t> excess;
            for (std::int64_t m : members) {
                const BucketKey label = labels[Assignment::position(part.domain, m)];
                if (label != kStarLabel) ++excess[label];
            }
            for (auto& [label, count] : excess) {
                const auto pair_key = left_side ? std::make_pair(s, label)
                                                : std::make_pair(label, s);
                count -= out.weights.beta.count(pair_key) ? out.weights.beta.at(pair_key) : 0;
            }
            for (auto it2 = members.rbegin(); it2 != members.rend(); ++it2) {
                BucketKey& label = labels[Assignment::position(part.domain, *it2)];
                if (label == kStarLabel) continue;
                auto ex = excess.find(label);
                if (ex != excess.end() && ex->second > 0) {
                    --ex->second;
                    label = kStarLabel;
                }
            }
        }
    };
    trim_side(left, out.assignment.left_labels, true);
    trim_side(right, out.assignment.right_labels, false);

    for (BucketKey label : out.assignment.left_labels)
        if (label == kStarLabel) ++out.weights.star1;
    for (BucketKey label : out.assignment.right_labels)
        if (label == kStarLabel) ++out.weights.star2;
    return out;
}

/// CSV serialization of the beta table: "s1,s2,beta" rows plus the two
/// reserve masses.
inline std::string template_csv(const TemplateWeights& w,
                                const std::vector<std::int64_t>& basis) {
    std::ostringstream out;
    out << "s1,s2,beta\n";
    for (const auto& [key, b] : w.beta)
        out << key_to_string(key.first, basis) << ',' << key_to_string(key.second, basis)
            << ',' << b << '\n';
    out << "*1,," << w.star1 << '\n';
    out << "*2,," << w.star2 << '\n';
    return out.str();
}

}  // namespace coperm
