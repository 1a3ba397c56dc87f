#pragma once

// The per-prime factor
//
//     f(p) = (p-1)^(2(1-1/p)) / (p (p-2)^(1-2/p)),       f(2) := 1/2,
//
// and the rigorous evaluation of its product over all primes. The factor
// satisfies 1 - 3/p^2 <= f(p) < 1 for p >= 3, so the product converges; the
// finite product up to a cutoff is computed in interval arithmetic and the
// omitted tail is absorbed by widening with sum_{m>cutoff} 3/m^2 <= 3/cutoff.

#include <cstdint>
#include <stdexcept>

#include "coperm/interval.hpp"
#include "coperm/primes.hpp"

namespace coperm {

namespace detail {
// log f(p) for an odd prime, as an enclosure. All inputs are exact doubles.
inline Interval euler_factor_log_unchecked(std::int64_t p) {
    const double pd = static_cast<double>(p);
    const Interval inv2p = Interval::exact(2.0) / Interval::exact(pd);
    const Interval c1 = Interval::exact(2.0) - inv2p;           // 2(1 - 1/p)
    const Interval c2 = Interval::exact(1.0) - inv2p;           // 1 - 2/p
    return c1 * log_i(Interval::exact(pd - 1.0)) -
           log_i(Interval::exact(pd)) -
           c2 * log_i(Interval::exact(pd - 2.0));
}
}  // namespace detail

/// Enclosure of log f(p); p must be an odd prime.
inline Interval euler_factor_log(std::int64_t p) {
    if (p < 3 || !is_prime(p))
        throw std::invalid_argument("euler_factor_log: argument must be an odd prime");
    return detail::euler_factor_log_unchecked(p);
}

/// Enclosure of f(p); exact [1/2, 1/2] for p = 2.
inline Interval euler_factor(std::int64_t p) {
    if (p == 2) return Interval::exact(0.5);
    return exp_i(euler_factor_log(p));
}

/// Enclosure of the full product prod_p f(p) over ALL primes, from the
/// finite product over p <= cutoff plus the 3/cutoff tail widening.
/// Requires cutoff >= 3.
inline Interval limit_constant(std::int64_t cutoff) {
    if (cutoff < 3) throw std::invalid_argument("limit_constant: cutoff must be >= 3");
    const std::vector<std::int64_t> primes = sieve_primes(cutoff);
    Interval log_sum = Interval::exact(0.0);
    for (std::int64_t p : primes) {
        if (p == 2) continue;
        log_sum += detail::euler_factor_log_unchecked(p);
    }
    const Interval tail = Interval::exact(3.0) / Interval::exact(static_cast<double>(cutoff));
    log_sum = widen(log_sum, tail.hi);
    return Interval::exact(0.5) * exp_i(log_sum);
}

}  // namespace coperm
