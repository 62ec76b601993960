#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace divchain {

using u64 = std::uint64_t;
using u32 = std::uint32_t;

// Smallest-prime-factor table for [0, limit], built by a linear sieve.
// Immutable after construction; all queries are const and thread safe.
class FactorTable {
public:
    explicit FactorTable(u64 limit);

    u64 limit() const { return limit_; }
    const std::vector<u32>& primes() const { return primes_; }

    // spf(0) and spf(1) are 0.
    u32 spf(u64 n) const { return spf_[n]; }
    bool is_prime(u64 n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }
    bool contains(u64 n) const { return n <= limit_; }

    // Index of the prime p in primes(); p must be prime.
    std::size_t prime_index(u32 p) const;

    // prod_{p < primes()[i]} (1 - 1/p); entry i = primes().size() is the full product.
    double euler_prefix(std::size_t i) const { return euler_prefix_[i]; }

private:
    u64 limit_;
    std::vector<u32> spf_;
    std::vector<u32> primes_;
    std::vector<double> euler_prefix_;
};

FactorTable build_sieve(long long X);

struct Factorization {
    std::vector<std::pair<u64, int>> pv;  // (prime, exponent), ascending primes
    int big_omega() const;
    int small_omega() const { return static_cast<int>(pv.size()); }
    u64 largest_prime() const { return pv.empty() ? 1 : pv.back().first; }
    int v(u64 p) const;
};

Factorization factorize(u64 n, const FactorTable& t);

struct FactorStats {
    int big_omega = 0;
    int small_omega = 0;
    std::vector<std::pair<u64, int>> vp;
    u64 largest_prime = 1;
};

FactorStats factor_stats(u64 n, const FactorTable& t);

// log p when n = p^k, else 0.
double lambda(u64 n, const FactorTable& t);

// Prime p with n = p^k, or 0 when n is not a prime power.
u64 prime_power_base(u64 n, const FactorTable& t);

std::vector<u64> divisors(u64 n, const FactorTable& t);

struct MertensSums {
    double sum_logp_over_p = 0;
    double sum_recip_p = 0;
    double euler_product = 1;
};

MertensSums mertens_sums(u64 x, const FactorTable& t);

struct PrimePower {
    u64 q;
    u32 p;
    int k;
    double log_p;
};

// All prime powers q <= Q in increasing order. Q must not exceed t.limit().
std::vector<PrimePower> prime_powers_up_to(u64 Q, const FactorTable& t);

// Chebyshev functions over the table range.
double chebyshev_theta(u64 x, const FactorTable& t);
double chebyshev_psi(u64 x, const FactorTable& t);

// Primes up to N from an odd-only bit sieve; used for ranges where an spf table
// would be too large (N up to about 2^32).
std::vector<u32> primes_up_to(u64 N);

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x)
    {
        double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

private:
    double s_ = 0, c_ = 0;
};

}  // namespace divchain
