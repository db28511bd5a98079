#ifndef SPONGEDIM_INTERVAL_HPP
#define SPONGEDIM_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>

namespace spongedim {

// Closed interval with outward rounding: every arithmetic result is widened
// by one ulp per endpoint, so the true real-arithmetic value is always
// contained.  Used for cylinder geometry so containment/disjointness
// decisions are robust against accumulated rounding.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double x) : lo(x), hi(x) {}
    Interval(double a, double b) : lo(a), hi(b) {}

    static double down(double x) {
        return std::nextafter(x, -std::numeric_limits<double>::infinity());
    }
    static double up(double x) {
        return std::nextafter(x, std::numeric_limits<double>::infinity());
    }

    Interval operator+(const Interval& o) const {
        return {down(lo + o.lo), up(hi + o.hi)};
    }
    Interval operator*(const Interval& o) const {
        const double c[4] = {lo * o.lo, lo * o.hi, hi * o.lo, hi * o.hi};
        return {down(std::min({c[0], c[1], c[2], c[3]})),
                up(std::max({c[0], c[1], c[2], c[3]}))};
    }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }

    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
};

// Open-interval disjointness on the certain side: true iff the OPEN intervals
// (a.lo, a.hi) and (b.lo, b.hi) are provably disjoint.  Endpoint touching
// counts as disjoint.
inline bool open_disjoint(const Interval& a, const Interval& b) {
    return a.hi <= b.lo || b.hi <= a.lo;
}

// Closed-interval disjointness (requires a genuine gap).
inline bool closed_disjoint(const Interval& a, const Interval& b) {
    return a.hi < b.lo || b.hi < a.lo;
}

}  // namespace spongedim

#endif
