#include "divchain/interval.hpp"

#include <algorithm>
#include <ostream>

#include "divchain/error.hpp"

namespace divchain {

namespace {

Interval widen(double lo, double hi, int ulps)
{
    for (int i = 0; i < ulps; ++i) lo = round_down(lo), hi = round_up(hi);
    return {lo, hi};
}

}  // namespace

Interval::Interval(double l, double h) : lo(l), hi(h)
{
    if (!(l <= h)) throw domain_error("interval with lo > hi or NaN endpoint");
}

Interval hull(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

Interval operator+(const Interval& a, const Interval& b) { return widen(a.lo + b.lo, a.hi + b.hi, 1); }

Interval operator-(const Interval& a, const Interval& b) { return widen(a.lo - b.hi, a.hi - b.lo, 1); }

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b)
{
    const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return widen(*std::min_element(p, p + 4), *std::max_element(p, p + 4), 1);
}

Interval operator/(const Interval& a, const Interval& b)
{
    if (b.lo <= 0 && b.hi >= 0) throw domain_error("interval division by an interval containing 0");
    const double p[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
    return widen(*std::min_element(p, p + 4), *std::max_element(p, p + 4), 1);
}

Interval exp(const Interval& x)
{
    Interval r = widen(std::exp(x.lo), std::exp(x.hi), 2);
    r.lo = std::max(r.lo, 0.0);
    return r;
}

Interval log(const Interval& x)
{
    if (!(x.lo > 0)) throw domain_error("interval log of a nonpositive range");
    return widen(std::log(x.lo), std::log(x.hi), 2);
}

Interval pow(const Interval& b, const Interval& u) { return exp(u * log(b)); }

std::ostream& operator<<(std::ostream& os, const Interval& x) { return os << '[' << x.lo << ", " << x.hi << ']'; }

}  // namespace divchain
