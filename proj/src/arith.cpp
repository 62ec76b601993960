#include "divchain/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <new>
#include <string>

#include "divchain/error.hpp"

namespace divchain {

namespace {

constexpr u64 kMaxTable = u64(1) << 31;

void check_range(u64 n, const FactorTable& t, u64 lo)
{
    if (n < lo || n > t.limit())
        throw domain_error("argument " + std::to_string(n) + " outside [" + std::to_string(lo) +
                           ", " + std::to_string(t.limit()) + "]");
}

}  // namespace

FactorTable::FactorTable(u64 limit) : limit_(limit)
{
    if (limit < 2) throw domain_error("sieve limit must be >= 2");
    if (limit > kMaxTable) throw resource_error("sieve limit too large for an spf table");
    try {
        spf_.assign(limit + 1, 0);
        primes_.reserve(limit < 100 ? 32 : static_cast<std::size_t>(1.26 * limit / std::log(double(limit))));
        for (u64 i = 2; i <= limit; ++i) {
            if (spf_[i] == 0) {
                spf_[i] = static_cast<u32>(i);
                primes_.push_back(static_cast<u32>(i));
            }
            const u32 si = spf_[i];
            for (u32 p : primes_) {
                if (p > si) break;
                u64 m = u64(p) * i;
                if (m > limit) break;
                spf_[m] = p;
            }
        }
        euler_prefix_.resize(primes_.size() + 1);
        double prod = 1.0;
        for (std::size_t i = 0; i < primes_.size(); ++i) {
            euler_prefix_[i] = prod;
            prod *= 1.0 - 1.0 / primes_[i];
        }
        euler_prefix_[primes_.size()] = prod;
    } catch (const std::bad_alloc&) {
        throw resource_error("out of memory building sieve");
    }
}

std::size_t FactorTable::prime_index(u32 p) const
{
    auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
    if (it == primes_.end() || *it != p) throw domain_error("not a tabulated prime");
    return static_cast<std::size_t>(it - primes_.begin());
}

FactorTable build_sieve(long long X)
{
    if (X < 2) throw domain_error("sieve limit must be >= 2");
    return FactorTable(static_cast<u64>(X));
}

int Factorization::big_omega() const
{
    int s = 0;
    for (auto& [p, e] : pv) s += e;
    return s;
}

int Factorization::v(u64 p) const
{
    for (auto& [q, e] : pv)
        if (q == p) return e;
    return 0;
}

Factorization factorize(u64 n, const FactorTable& t)
{
    check_range(n, t, 1);
    Factorization f;
    while (n > 1) {
        u64 p = t.spf(n);
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.pv.emplace_back(p, e);
    }
    return f;
}

FactorStats factor_stats(u64 n, const FactorTable& t)
{
    check_range(n, t, 2);
    Factorization f = factorize(n, t);
    FactorStats s;
    s.big_omega = f.big_omega();
    s.small_omega = f.small_omega();
    s.largest_prime = f.largest_prime();
    s.vp = std::move(f.pv);
    return s;
}

u64 prime_power_base(u64 n, const FactorTable& t)
{
    check_range(n, t, 1);
    if (n < 2) return 0;
    u64 p = t.spf(n);
    while (n % p == 0) n /= p;
    return n == 1 ? p : 0;
}

double lambda(u64 n, const FactorTable& t)
{
    check_range(n, t, 2);
    u64 p = prime_power_base(n, t);
    return p ? std::log(double(p)) : 0.0;
}

std::vector<u64> divisors(u64 n, const FactorTable& t)
{
    check_range(n, t, 1);
    std::vector<u64> d{1};
    for (auto& [p, e] : factorize(n, t).pv) {
        std::size_t base = d.size();
        u64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) d.push_back(d[i] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

MertensSums mertens_sums(u64 x, const FactorTable& t)
{
    check_range(x, t, 2);
    CompensatedSum a, b;
    MertensSums m;
    for (u32 p : t.primes()) {
        if (p > x) break;
        double lp = std::log(double(p));
        a.add(lp / p);
        b.add(1.0 / p);
        m.euler_product *= 1.0 - 1.0 / p;
    }
    m.sum_logp_over_p = a.value();
    m.sum_recip_p = b.value();
    return m;
}

std::vector<PrimePower> prime_powers_up_to(u64 Q, const FactorTable& t)
{
    if (Q > t.limit()) throw domain_error("prime-power cutoff exceeds sieve limit");
    std::vector<PrimePower> out;
    for (u32 p : t.primes()) {
        if (p > Q) break;
        double lp = std::log(double(p));
        u64 q = p;
        for (int k = 1;; ++k) {
            out.push_back({q, p, k, lp});
            if (q > Q / p) break;
            q *= p;
        }
    }
    std::sort(out.begin(), out.end(), [](const PrimePower& a, const PrimePower& b) { return a.q < b.q; });
    return out;
}

double chebyshev_theta(u64 x, const FactorTable& t)
{
    check_range(x, t, 1);
    CompensatedSum s;
    for (u32 p : t.primes()) {
        if (p > x) break;
        s.add(std::log(double(p)));
    }
    return s.value();
}

double chebyshev_psi(u64 x, const FactorTable& t)
{
    check_range(x, t, 1);
    CompensatedSum s;
    for (u32 p : t.primes()) {
        if (p > x) break;
        double lp = std::log(double(p));
        for (u64 q = p; q <= x; q *= p) {
            s.add(lp);
            if (q > x / p) break;
        }
    }
    return s.value();
}

std::vector<u32> primes_up_to(u64 N)
{
    if (N > std::numeric_limits<u32>::max()) throw resource_error("prime cutoff too large");
    std::vector<u32> out;
    if (N < 2) return out;
    out.push_back(2);
    // bit i stands for 2i+1
    const u64 nbits = (N - 1) / 2 + 1;
    std::vector<std::uint64_t> composite;
    try {
        composite.assign(nbits / 64 + 1, 0);
        out.reserve(static_cast<std::size_t>(1.26 * N / std::log(double(N)) + 16));
    } catch (const std::bad_alloc&) {
        throw resource_error("out of memory in prime bit sieve");
    }
    for (u64 i = 1; i < nbits; ++i) {
        if (composite[i >> 6] >> (i & 63) & 1) continue;
        u64 p = 2 * i + 1;
        out.push_back(static_cast<u32>(p));
        u64 start = p * p;
        if (start > N) continue;
        for (u64 j = start / 2; j < nbits; j += p) composite[j >> 6] |= std::uint64_t(1) << (j & 63);
    }
    return out;
}

}  // namespace divchain
