#pragma once

// Numeric bound machinery: the multiplicative Chernoff tail, the per-element
// log-rate of the truncated upper-bound main term, and the convergence table
// of n-th root rates r_n = (C(n)/n!)^(1/n) against the limiting constant.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "coperm/bigcount.hpp"
#include "coperm/counts.hpp"
#include "coperm/euler.hpp"

namespace coperm {

/// exp(-delta^2 mean / (2 + delta)), clamped to [0, 1]. Valid for sums of
/// independent [0,1] variables and for hypergeometric draws.
inline double chernoff_tail(double mean, double delta) {
    if (!(mean > 0.0)) throw std::invalid_argument("chernoff_tail: mean must be positive");
    if (delta < 0.0) throw std::invalid_argument("chernoff_tail: delta must be >= 0");
    const double v = std::exp(-delta * delta * mean / (2.0 + delta));
    return std::min(1.0, std::max(0.0, v));
}

/// Sum of log f(p) over the basis primes (f(2) = 1/2). Multiplied by n this
/// is the log of the truncated product in the (n/e)^n main term.
inline double upper_bound_log_rate(const PrimeBasis& basis) {
    if (basis.primes.empty() || basis.primes.front() != 2)
        throw std::invalid_argument("upper_bound_log_rate: basis must include 2");
    double sum = std::log(0.5);
    for (std::int64_t p : basis.primes) {
        if (p == 2) continue;
        sum += euler_factor_log(p).mid();
    }
    return sum;
}

struct ConvergenceRow {
    int n;
    BigCount count;
    double rate;  // (C(n)/n!)^(1/n)
};

/// Exact counts C(n) with their n-th root rates for n = 1..n_max (<= 30).
inline std::vector<ConvergenceRow> convergence_table(int n_max, unsigned threads = 0) {
    if (n_max < 1 || n_max > kCountMaxN)
        throw std::invalid_argument("convergence_table: n_max must be in [1, 30]");
    std::vector<ConvergenceRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        ConvergenceRow row;
        row.n = n;
        row.count = count_C(n, threads);
        row.rate = std::exp((log_big(row.count) - std::lgamma(static_cast<double>(n) + 1.0)) /
                            static_cast<double>(n));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::ostringstream out;
    out << "n,count,rate\n";
    out.precision(12);
    for (const auto& row : rows)
        out << row.n << ',' << to_decimal(row.count) << ',' << row.rate << '\n';
    return out.str();
}

}  // namespace coperm
