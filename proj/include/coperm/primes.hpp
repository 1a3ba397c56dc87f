#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace coperm {

/// All primes in [2, limit], ascending. Empty for limit < 2.
inline std::vector<std::int64_t> sieve_primes(std::int64_t limit) {
    if (limit < 0) throw std::invalid_argument("sieve_primes: negative limit");
    std::vector<std::int64_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::int64_t p = 2; p * p <= limit; ++p) {
        if (composite[static_cast<std::size_t>(p)]) continue;
        for (std::int64_t m = p * p; m <= limit; m += p)
            composite[static_cast<std::size_t>(m)] = true;
    }
    for (std::int64_t p = 2; p <= limit; ++p)
        if (!composite[static_cast<std::size_t>(p)]) primes.push_back(p);
    return primes;
}

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (std::int64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

/// The small primes up to a cutoff, optionally with 2 removed (the odd basis
/// used when even values are handled by the even/odd reduction).
struct PrimeBasis {
    std::int64_t limit = 0;
    bool exclude_two = false;
    std::vector<std::int64_t> primes;

    PrimeBasis() = default;
    PrimeBasis(std::int64_t limit_, bool exclude_two_ = false)
        : limit(limit_), exclude_two(exclude_two_), primes(sieve_primes(limit_)) {
        if (exclude_two && !primes.empty() && primes.front() == 2)
            primes.erase(primes.begin());
    }

    bool contains(std::int64_t p) const {
        for (std::int64_t q : primes)
            if (q == p) return true;
        return false;
    }
};

/// Cutoff and bucket-complexity parameters as functions of n:
///   w     = exp(2^-10 (log n · log log n)^(1/2))
///   k     = 2^-5 (log n / log log n)^(1/2)
///   alpha = exp(-k log k)
/// Natural logarithms throughout. Requires n >= 16 so that the k ratio is
/// strictly increasing (log log n > 1).
struct ScaleParams {
    std::int64_t n;
    double w;
    double k;
    double alpha;
};

inline ScaleParams scale_params(std::int64_t n) {
    if (n < 16) throw std::invalid_argument("scale_params: n must be >= 16");
    const double ln = std::log(static_cast<double>(n));
    const double lln = std::log(ln);
    ScaleParams out;
    out.n = n;
    out.w = std::exp(std::pow(2.0, -10.0) * std::sqrt(ln * lln));
    out.k = std::pow(2.0, -5.0) * std::sqrt(ln / lln);
    out.alpha = std::exp(-out.k * std::log(out.k));
    return out;
}

}  // namespace coperm
