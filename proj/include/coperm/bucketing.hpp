#pragma once

// Decomposition of an integer interval (or the odd interval {1,3,...,2n-1})
// into buckets keyed by the exact set of basis primes dividing each element.
// Elements with at least k distinct basis-prime divisors go to a shared
// overflow set. Bucket sizes can also be computed without scanning, by
// inclusion-exclusion over the complement of the key, with the classical
// alternating truncation bracket at finite depth.

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "coperm/primes.hpp"

namespace coperm {

/// Subset of the basis encoded as a bitmask over basis indices.
using BucketKey = std::uint64_t;

inline constexpr BucketKey kEmptyKey = 0;
inline constexpr std::int64_t kMaxDomainSize = 100'000'000;
inline constexpr int kMaxPieComplement = 25;

enum class DomainKind { Interval, OddInterval };

/// Either [1..n] or the first n odd positive integers {1,3,...,2n-1}.
struct Domain {
    DomainKind kind;
    std::int64_t n;

    static Domain interval(std::int64_t n) { return Domain{DomainKind::Interval, n}; }
    static Domain odd_interval(std::int64_t n) { return Domain{DomainKind::OddInterval, n}; }

    std::int64_t size() const { return n; }
    std::int64_t value_at(std::int64_t i) const {
        return kind == DomainKind::Interval ? i + 1 : 2 * i + 1;
    }
    std::int64_t max_value() const {
        return kind == DomainKind::Interval ? n : 2 * n - 1;
    }
};

namespace detail {
inline void check_basis(const std::vector<std::int64_t>& basis) {
    if (basis.size() > 63) throw std::invalid_argument("basis: too many primes (max 63)");
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (!is_prime(basis[i])) throw std::invalid_argument("basis: entries must be prime");
        if (i > 0 && basis[i] <= basis[i - 1])
            throw std::invalid_argument("basis: entries must be strictly ascending");
    }
}
inline bool key_in_basis(BucketKey key, std::size_t basis_size) {
    return basis_size >= 64 || (key >> basis_size) == 0;
}
}  // namespace detail

inline std::string key_to_string(BucketKey key, const std::vector<std::int64_t>& basis) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if ((key >> i) & 1ULL) {
            if (!first) out += ",";
            out += std::to_string(basis[i]);
            first = false;
        }
    }
    out += "}";
    return out;
}

struct BucketPartition {
    Domain domain;
    std::vector<std::int64_t> basis;
    int k = 1;
    std::map<BucketKey, std::vector<std::int64_t>> buckets;  // ascending members
    std::vector<std::int64_t> overflow;

    std::int64_t total_members() const {
        std::int64_t total = static_cast<std::int64_t>(overflow.size());
        for (const auto& [key, members] : buckets)
            total += static_cast<std::int64_t>(members.size());
        return total;
    }
};

/// Single-scan partition: element m lands in the bucket keyed by its exact
/// basis-divisor set when that set has fewer than k primes, else in overflow.
inline BucketPartition partition(Domain domain, const std::vector<std::int64_t>& basis, int k) {
    if (domain.n < 1) throw std::invalid_argument("partition: domain must be nonempty");
    if (domain.n > kMaxDomainSize)
        throw std::invalid_argument("partition: domain larger than 10^8 elements");
    if (k < 1) throw std::invalid_argument("partition: k must be >= 1");
    detail::check_basis(basis);

    BucketPartition part;
    part.domain = domain;
    part.basis = basis;
    part.k = k;
    for (std::int64_t i = 0; i < domain.n; ++i) {
        const std::int64_t m = domain.value_at(i);
        BucketKey key = 0;
        int bits = 0;
        for (std::size_t b = 0; b < basis.size(); ++b) {
            if (basis[b] > m) break;
            if (m % basis[b] == 0) {
                key |= 1ULL << b;
                ++bits;
            }
        }
        if (bits >= k)
            part.overflow.push_back(m);
        else
            part.buckets[key].push_back(m);
    }
    return part;
}

/// Heuristic size n * prod_{p in S} 1/p * prod_{p in basis \ S} (1 - 1/p).
inline double predicted_size(std::int64_t n, BucketKey s,
                             const std::vector<std::int64_t>& basis) {
    detail::check_basis(basis);
    if (!detail::key_in_basis(s, basis.size()))
        throw std::invalid_argument("predicted_size: key not within basis");
    double out = static_cast<double>(n);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const double p = static_cast<double>(basis[i]);
        out *= ((s >> i) & 1ULL) ? 1.0 / p : 1.0 - 1.0 / p;
    }
    return out;
}

namespace detail {
// Per-cardinality sums of floor(n / (prod(S) * prod(T))) over subsets T of
// the complement, pruned where the product exceeds n (all deeper terms 0).
inline void pie_sums(std::int64_t n, std::int64_t prod,
                     const std::vector<std::int64_t>& comp, std::size_t from,
                     int depth_len, int card, std::vector<std::int64_t>& sums) {
    sums[static_cast<std::size_t>(card)] += n / prod;
    if (card >= depth_len) return;
    for (std::size_t i = from; i < comp.size(); ++i) {
        if (comp[i] > n / prod) break;  // ascending primes: later ones only larger
        pie_sums(n, prod * comp[i], comp, i + 1, depth_len, card + 1, sums);
    }
}

inline std::vector<std::int64_t> pie_complement(BucketKey s,
                                                const std::vector<std::int64_t>& basis) {
    std::vector<std::int64_t> comp;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (!((s >> i) & 1ULL)) comp.push_back(basis[i]);
    return comp;
}

inline std::int64_t pie_prefix(const std::vector<std::int64_t>& sums, int depth) {
    std::int64_t v = 0;
    for (int j = 0; j <= depth; ++j)
        v += (j % 2 == 0) ? sums[static_cast<std::size_t>(j)]
                          : -sums[static_cast<std::size_t>(j)];
    return v;
}
}  // namespace detail

/// Exact bucket size within [1..n] by full inclusion-exclusion:
///   |A_S| = sum_{T subset of basis\S} (-1)^|T| floor(n / prod(S u T)).
/// Refused when the complement has more than 25 primes; scan instead.
inline std::int64_t pie_bucket_size(std::int64_t n, BucketKey s,
                                    const std::vector<std::int64_t>& basis) {
    detail::check_basis(basis);
    if (!detail::key_in_basis(s, basis.size()))
        throw std::invalid_argument("pie_bucket_size: key not within basis");
    std::vector<std::int64_t> comp = detail::pie_complement(s, basis);
    if (static_cast<int>(comp.size()) > kMaxPieComplement)
        throw std::invalid_argument(
            "pie_bucket_size: complement exceeds 25 primes; use partition() scanning");
    std::int64_t prod_s = 1;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (!((s >> i) & 1ULL)) continue;
        if (basis[i] > n / prod_s) return 0;  // prod(S) > n: every term floors to 0
        prod_s *= basis[i];
    }
    const int len = static_cast<int>(comp.size());
    std::vector<std::int64_t> sums(static_cast<std::size_t>(len) + 1, 0);
    detail::pie_sums(n, prod_s, comp, 0, len, 0, sums);
    return detail::pie_prefix(sums, len);
}

/// Truncated inclusion-exclusion with the alternating bracket: truncations at
/// even depth over-count and at odd depth under-count, so consecutive depths
/// (d, d+1) enclose the exact value.
struct PieBracket {
    std::int64_t value;  // alternating sum truncated at |T| <= depth
    std::int64_t lo;
    std::int64_t hi;
    bool exact;  // depth reached the full complement
};

inline PieBracket pie_bucket_size_truncated(std::int64_t n, BucketKey s,
                                            const std::vector<std::int64_t>& basis,
                                            int depth) {
    if (depth < 0) throw std::invalid_argument("pie_bucket_size_truncated: negative depth");
    detail::check_basis(basis);
    if (!detail::key_in_basis(s, basis.size()))
        throw std::invalid_argument("pie_bucket_size_truncated: key not within basis");
    std::vector<std::int64_t> comp = detail::pie_complement(s, basis);
    const int len = static_cast<int>(comp.size());

    std::int64_t prod_s = 1;
    bool zero = false;
    for (std::size_t i = 0; i < basis.size() && !zero; ++i) {
        if (!((s >> i) & 1ULL)) continue;
        if (basis[i] > n / prod_s) zero = true;
        else prod_s *= basis[i];
    }
    if (zero) return PieBracket{0, 0, 0, true};

    const int reach = std::min(depth + 1, len);
    std::vector<std::int64_t> sums(static_cast<std::size_t>(reach) + 1, 0);
    detail::pie_sums(n, prod_s, comp, 0, reach, 0, sums);

    PieBracket out{};
    if (depth >= len) {
        out.value = detail::pie_prefix(sums, len);
        out.lo = out.hi = out.value;
        out.exact = true;
        return out;
    }
    out.value = detail::pie_prefix(sums, depth);
    const std::int64_t next = detail::pie_prefix(sums, depth + 1);
    out.lo = std::min(out.value, next);
    out.hi = std::max(out.value, next);
    out.exact = false;
    return out;
}

/// Default truncation depth, 4k.
inline int default_pie_depth(int k) { return 4 * k; }

/// Sum of 1/p over the distinct prime divisors p of ell exceeding the cutoff,
/// as an exact rational.
inline mpq_class large_prime_recip_sum(std::int64_t ell, double cutoff) {
    if (ell < 1) throw std::invalid_argument("large_prime_recip_sum: ell must be >= 1");
    mpq_class sum = 0;
    std::int64_t rest = ell;
    auto account = [&](std::int64_t p) {
        if (static_cast<double>(p) > cutoff) sum += mpq_class(1, static_cast<unsigned long>(p));
    };
    if (rest % 2 == 0) {
        account(2);
        while (rest % 2 == 0) rest /= 2;
    }
    for (std::int64_t d = 3; d * d <= rest; d += 2) {
        if (rest % d != 0) continue;
        account(d);
        while (rest % d == 0) rest /= d;
    }
    if (rest > 1) account(rest);
    sum.canonicalize();
    return sum;
}

/// |bucket(S) intersect {m : q | m}| by scanning the stored members.
/// q must be a prime outside the basis (the bucket already fixes basis
/// divisibility).
inline std::int64_t bucket_prime_count(const BucketPartition& part, BucketKey s,
                                       std::int64_t q) {
    if (!is_prime(q)) throw std::invalid_argument("bucket_prime_count: q must be prime");
    for (std::int64_t p : part.basis)
        if (p == q) throw std::invalid_argument("bucket_prime_count: q must not be in the basis");
    auto it = part.buckets.find(s);
    if (it == part.buckets.end()) return 0;
    std::int64_t count = 0;
    for (std::int64_t m : it->second)
        if (m % q == 0) ++count;
    return count;
}

/// Line-oriented serialization: one "key: members..." line per bucket in
/// ascending key order, then the overflow line.
inline std::string bucket_lines(const BucketPartition& part) {
    std::ostringstream out;
    for (const auto& [key, members] : part.buckets) {
        out << key_to_string(key, part.basis) << ":";
        for (std::int64_t m : members) out << ' ' << m;
        out << '\n';
    }
    out << "overflow:";
    for (std::int64_t m : part.overflow) out << ' ' << m;
    out << '\n';
    return out.str();
}

}  // namespace coperm
