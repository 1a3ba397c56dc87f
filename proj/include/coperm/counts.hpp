#pragma once

// Exact enumeration of coprime permutations and bijections. A coprime
// permutation maps every m to a value sharing no prime factor with m; the
// count equals the permanent of the bipartite gcd-adjacency matrix. Three
// variants:
//   C(n)   permutations of [n],
//   C0(n)  bijections {1,3,...,2n-1} -> [n],
//   Ck(n)  permutations of [n] with gcd(m, sigma(m), k!) = 1.
// A factorial-time brute-force counter (n <= 9) serves as an independent
// oracle for the permanent path.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "coperm/bigcount.hpp"
#include "coperm/bitmatrix.hpp"
#include "coperm/permanent.hpp"

namespace coperm {

enum class Variant { C, C0, Ck };

inline constexpr int kCountMaxN = 30;
inline constexpr int kBruteForceMaxN = 9;
inline constexpr int kFactorialMaxK = 20;  // largest k with k! in 64 bits

inline std::uint64_t factorial_u64(int k) {
    if (k < 0 || k > kFactorialMaxK)
        throw std::invalid_argument("factorial_u64: k must be in [0, 20]");
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

/// Bipartite adjacency between two value lists; bit (i, j) is set iff
/// gcd(left[i], right[j]) = 1, intersected with a modulus when given
/// (gcd(left[i], right[j], modulus) = 1).
struct CoprimalityGraph {
    std::vector<std::int64_t> left;
    std::vector<std::int64_t> right;
    BitMatrix adj;
};

inline CoprimalityGraph coprimality_graph(std::vector<std::int64_t> left,
                                          std::vector<std::int64_t> right,
                                          std::optional<std::uint64_t> modulus = {}) {
    if (left.empty() || right.empty())
        throw std::invalid_argument("coprimality_graph: lists must be nonempty");
    if (modulus && *modulus < 1)
        throw std::invalid_argument("coprimality_graph: modulus must be >= 1");
    for (std::size_t i = 1; i < left.size(); ++i)
        if (left[i] <= left[i - 1])
            throw std::invalid_argument("coprimality_graph: left list must be strictly ascending");
    for (std::size_t j = 1; j < right.size(); ++j)
        if (right[j] <= right[j - 1])
            throw std::invalid_argument("coprimality_graph: right list must be strictly ascending");

    CoprimalityGraph g;
    g.left = std::move(left);
    g.right = std::move(right);
    g.adj = BitMatrix(static_cast<int>(g.left.size()), static_cast<int>(g.right.size()));
    for (std::size_t i = 0; i < g.left.size(); ++i) {
        for (std::size_t j = 0; j < g.right.size(); ++j) {
            std::uint64_t d = std::gcd(static_cast<std::uint64_t>(g.left[i]),
                                       static_cast<std::uint64_t>(g.right[j]));
            if (modulus) d = std::gcd(d, *modulus);
            if (d == 1) g.adj.set(static_cast<int>(i), static_cast<int>(j), true);
        }
    }
    return g;
}

namespace detail {
inline std::vector<std::int64_t> iota_list(int n, bool odd) {
    std::vector<std::int64_t> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = odd ? 2 * i + 1 : i + 1;
    return v;
}
inline void check_count_n(int n) {
    if (n < 1 || n > kCountMaxN)
        throw std::invalid_argument("exact count: n must be in [1, 30]");
}
}  // namespace detail

/// C(n): coprime permutations of [n].
inline BigCount count_C(int n, unsigned threads = 0) {
    detail::check_count_n(n);
    return permanent(coprimality_graph(detail::iota_list(n, false),
                                       detail::iota_list(n, false)).adj, threads);
}

/// C0(n): coprime bijections {1,3,...,2n-1} -> [n].
inline BigCount count_C0(int n, unsigned threads = 0) {
    detail::check_count_n(n);
    return permanent(coprimality_graph(detail::iota_list(n, true),
                                       detail::iota_list(n, false)).adj, threads);
}

/// Ck(n): permutations of [n] with gcd(m, sigma(m), k!) = 1.
inline BigCount count_Ck(int n, int kparam, unsigned threads = 0) {
    detail::check_count_n(n);
    if (kparam < 1)
        throw std::invalid_argument("count_Ck: kparam must be >= 1");
    const std::uint64_t modulus = factorial_u64(kparam);
    return permanent(coprimality_graph(detail::iota_list(n, false),
                                       detail::iota_list(n, false), modulus).adj, threads);
}

/// Independent oracle: iterate all n! assignments and test gcds directly.
inline BigCount brute_force_count(int n, Variant variant, int kparam = 1) {
    if (n < 1 || n > kBruteForceMaxN)
        throw std::invalid_argument("brute_force_count: n must be in [1, 9]");
    std::vector<std::int64_t> domain = detail::iota_list(n, variant == Variant::C0);
    std::vector<std::int64_t> image = detail::iota_list(n, false);
    std::optional<std::uint64_t> modulus;
    if (variant == Variant::Ck) {
        if (kparam < 1) throw std::invalid_argument("brute_force_count: kparam must be >= 1");
        modulus = factorial_u64(kparam);
    }
    BigCount count = 0;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            std::uint64_t d =
                std::gcd(static_cast<std::uint64_t>(domain[static_cast<std::size_t>(i)]),
                         static_cast<std::uint64_t>(image[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]));
            if (modulus) d = std::gcd(d, *modulus);
            ok = (d == 1);
        }
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

}  // namespace coperm
