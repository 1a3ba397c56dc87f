#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace coperm {

/// Arbitrary-precision nonnegative count.
using BigCount = mpz_class;

inline std::string to_decimal(const BigCount& v) { return v.get_str(10); }

/// Natural log of a positive big integer, in double precision.
inline double log_big(const BigCount& v) {
    if (v <= 0) throw std::invalid_argument("log_big: nonpositive value");
    signed long exp2;
    const double d = mpz_get_d_2exp(&exp2, v.get_mpz_t());
    return std::log(d) + static_cast<double>(exp2) * std::log(2.0);
}

inline BigCount u128_to_big(unsigned __int128 v) {
    BigCount out = static_cast<unsigned long>(v >> 64);
    out <<= 64;
    out += static_cast<unsigned long>(v & ~0ULL);
    return out;
}

}  // namespace coperm
