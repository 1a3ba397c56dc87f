#pragma once

// Rigorous interval arithmetic on hardware doubles. Every operation rounds
// outward: elementary arithmetic is widened by one ulp per endpoint, library
// transcendentals (log, exp) by two ulps to cover their documented error.
// An Interval produced by these routines always encloses the exact result.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace coperm {

namespace detail {
inline double step_down(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}
inline double step_up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}
}  // namespace detail

struct Interval {
    double lo;
    double hi;

    Interval() : lo(0.0), hi(0.0) {}
    Interval(double l, double h) : lo(l), hi(h) {
        if (!(l <= h)) throw std::invalid_argument("Interval: lo > hi");
    }

    static Interval exact(double x) { return Interval(x, x); }

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
};

inline Interval operator+(const Interval& a, const Interval& b) {
    return Interval(detail::step_down(a.lo + b.lo), detail::step_up(a.hi + b.hi));
}

inline Interval operator-(const Interval& a, const Interval& b) {
    return Interval(detail::step_down(a.lo - b.hi), detail::step_up(a.hi - b.lo));
}

inline Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

inline Interval operator*(const Interval& a, const Interval& b) {
    const double p1 = a.lo * b.lo, p2 = a.lo * b.hi;
    const double p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    const double lo = std::min(std::min(p1, p2), std::min(p3, p4));
    const double hi = std::max(std::max(p1, p2), std::max(p3, p4));
    return Interval(detail::step_down(lo), detail::step_up(hi));
}

inline Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo <= 0.0 && b.hi >= 0.0)
        throw std::domain_error("Interval division by interval containing zero");
    const double p1 = a.lo / b.lo, p2 = a.lo / b.hi;
    const double p3 = a.hi / b.lo, p4 = a.hi / b.hi;
    const double lo = std::min(std::min(p1, p2), std::min(p3, p4));
    const double hi = std::max(std::max(p1, p2), std::max(p3, p4));
    return Interval(detail::step_down(lo), detail::step_up(hi));
}

inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }

/// Enclosure of log over a positive interval. log(1) is pinned to 0.
inline Interval log_i(const Interval& a) {
    if (a.lo <= 0.0) throw std::domain_error("log_i: nonpositive argument");
    const double lo = (a.lo == 1.0) ? 0.0
                                    : detail::step_down(detail::step_down(std::log(a.lo)));
    const double hi = (a.hi == 1.0) ? 0.0
                                    : detail::step_up(detail::step_up(std::log(a.hi)));
    return Interval(lo, hi);
}

inline Interval exp_i(const Interval& a) {
    const double lo = (a.lo == 0.0) ? 1.0
                                    : detail::step_down(detail::step_down(std::exp(a.lo)));
    const double hi = (a.hi == 0.0) ? 1.0
                                    : detail::step_up(detail::step_up(std::exp(a.hi)));
    return Interval(std::max(lo, 0.0), hi);
}

/// Symmetric widening: the enclosure of x + [-r, r] for r >= 0.
inline Interval widen(const Interval& a, double r) {
    if (r < 0.0) throw std::invalid_argument("widen: negative radius");
    return Interval(detail::step_down(a.lo - r), detail::step_up(a.hi + r));
}

}  // namespace coperm
