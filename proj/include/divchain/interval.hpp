#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>

namespace divchain {

// Closed interval [lo, hi] with outward rounding. Every operation rounds to nearest and then
// widens by one ulp on each side (two for exp and log), so the exact result of any composed
// expression stays inside.
struct Interval {
    double lo = 0;
    double hi = 0;

    Interval() = default;
    Interval(double x) : lo(x), hi(x) {}  // NOLINT: implicit so templated formulas accept literals
    Interval(double l, double h);

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool positive() const { return lo > 0; }
};

inline double round_down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double round_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

Interval hull(const Interval& a, const Interval& b);

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
// Throws domain_error when b contains 0.
Interval operator/(const Interval& a, const Interval& b);

inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
inline Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }
inline Interval& operator/=(Interval& a, const Interval& b) { return a = a / b; }

Interval exp(const Interval& x);
// Throws domain_error unless x.lo > 0.
Interval log(const Interval& x);
// b^u = exp(u log b) for b > 0.
Interval pow(const Interval& b, const Interval& u);

std::ostream& operator<<(std::ostream& os, const Interval& x);

}  // namespace divchain
