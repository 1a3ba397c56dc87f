#pragma once

// Exact permanent of a square 0/1 matrix by Ryser's inclusion-exclusion,
//
//     perm(A) = (-1)^n sum_{S != empty} (-1)^|S| prod_i sum_{j in S} a_ij,
//
// walking column subsets in Gray-code order so each step updates the row
// sums incrementally (one column toggled per step). Row-sum products are
// accumulated in unsigned 128-bit arithmetic and flushed into GMP integers
// before they can overflow; dimensions above 26 split the product. The
// subset space may be partitioned statically across threads, each owning an
// independent Gray-code walk; integer addition makes the reduction exact and
// deterministic regardless of scheduling.
//
// Dimension is capped at 30 (about 2^30 * 30 word operations at the cap).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "coperm/bigcount.hpp"
#include "coperm/bitmatrix.hpp"

namespace coperm {

inline constexpr int kPermanentMaxDim = 30;

namespace detail {

struct RyserSlice {
    BigCount even;  // sum of products over subsets of even size
    BigCount odd;
};

// Accumulates the Ryser terms for subset indices in [lo, hi).
inline RyserSlice ryser_slice(const std::vector<std::uint32_t>& col_mask, int n,
                              std::uint64_t lo, std::uint64_t hi) {
    RyserSlice out;
    std::vector<std::int32_t> row_sum(static_cast<std::size_t>(n), 0);
    int zero_rows = n;

    auto apply_column = [&](int j, int delta) {
        std::uint32_t m = col_mask[static_cast<std::size_t>(j)];
        while (m != 0) {
            const int r = std::countr_zero(m);
            m &= m - 1;
            std::int32_t& s = row_sum[static_cast<std::size_t>(r)];
            if (s == 0) --zero_rows;
            s += delta;
            if (s == 0) ++zero_rows;
        }
    };

    std::uint32_t subset = static_cast<std::uint32_t>((lo - 1) ^ ((lo - 1) >> 1));
    for (std::uint32_t m = subset; m != 0; m &= m - 1)
        apply_column(std::countr_zero(m), +1);

    // Flush window keeping the 128-bit accumulators below 2^127: each term
    // is at most n^n < 2^(n log2 n).
    const double bits = n * std::log2(static_cast<double>(n > 1 ? n : 2));
    const int spare = std::max(0, std::min(16, 126 - static_cast<int>(bits) - 1));
    const std::uint64_t window = 1ULL << spare;

    unsigned __int128 acc[2] = {0, 0};
    std::uint64_t pending = 0;
    auto flush = [&]() {
        if (acc[0] != 0) { out.even += u128_to_big(acc[0]); acc[0] = 0; }
        if (acc[1] != 0) { out.odd += u128_to_big(acc[1]); acc[1] = 0; }
        pending = 0;
    };

    const bool split_product = n > 26;
    const int half = n / 2;

    for (std::uint64_t i = lo; i < hi; ++i) {
        const int j = std::countr_zero(i);
        const int delta = (subset >> j) & 1U ? -1 : +1;
        subset ^= 1U << j;
        apply_column(j, delta);
        if (zero_rows != 0) continue;
        const unsigned parity = static_cast<unsigned>(std::popcount(subset)) & 1U;
        if (!split_product) {
            unsigned __int128 prod = 1;
            for (int r = 0; r < n; ++r)
                prod *= static_cast<std::uint64_t>(row_sum[static_cast<std::size_t>(r)]);
            acc[parity] += prod;
            if (++pending >= window) flush();
        } else {
            unsigned __int128 a = 1, b = 1;
            for (int r = 0; r < half; ++r)
                a *= static_cast<std::uint64_t>(row_sum[static_cast<std::size_t>(r)]);
            for (int r = half; r < n; ++r)
                b *= static_cast<std::uint64_t>(row_sum[static_cast<std::size_t>(r)]);
            BigCount term = u128_to_big(a);
            term *= u128_to_big(b);
            (parity ? out.odd : out.even) += term;
        }
    }
    flush();
    return out;
}

}  // namespace detail

/// Exact permanent of a square 0/1 matrix; dimension in [1, 30].
/// threads = 0 picks the hardware concurrency.
inline BigCount permanent(const BitMatrix& m, unsigned threads = 0) {
    if (m.rows() != m.cols()) throw std::invalid_argument("permanent: matrix must be square");
    const int n = m.rows();
    if (n < 1 || n > kPermanentMaxDim)
        throw std::invalid_argument("permanent: dimension must be in [1, 30]");

    std::vector<std::uint32_t> col_mask(static_cast<std::size_t>(n), 0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (m.get(r, c)) col_mask[static_cast<std::size_t>(c)] |= 1U << r;

    const std::uint64_t total = (1ULL << n);  // subset indices [1, 2^n)
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    if (n < 16) threads = 1;
    const std::uint64_t span = total - 1;
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, span));

    std::vector<detail::RyserSlice> slices(threads);
    if (threads == 1) {
        slices[0] = detail::ryser_slice(col_mask, n, 1, total);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t lo = 1 + span * t / threads;
            const std::uint64_t hi = 1 + span * (t + 1) / threads;
            pool.emplace_back([&, t, lo, hi]() {
                slices[t] = detail::ryser_slice(col_mask, n, lo, hi);
            });
        }
        for (auto& th : pool) th.join();
    }

    BigCount even = 0, odd = 0;
    for (const auto& s : slices) {
        even += s.even;
        odd += s.odd;
    }
    BigCount result = (n % 2 == 0) ? even - odd : odd - even;
    return result;
}

}  // namespace coperm
