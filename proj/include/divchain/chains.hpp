#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "divchain/arith.hpp"
#include "divchain/weights.hpp"

namespace divchain {

enum class ChainKind { random_prime, mertens, von_mangoldt, eps_modified, odd_banks_martin };

struct ChainId {
    ChainKind kind = ChainKind::von_mangoldt;
    int k = 1;              // odd_banks_martin: absorbing layer Omega = k
    std::vector<u32> Q;     // odd_banks_martin: allowed odd primes, ascending

    static ChainId random_prime() { return {ChainKind::random_prime, 1, {}}; }
    static ChainId mertens() { return {ChainKind::mertens, 1, {}}; }
    static ChainId von_mangoldt() { return {ChainKind::von_mangoldt, 1, {}}; }
    static ChainId eps_modified() { return {ChainKind::eps_modified, 1, {}}; }
    static ChainId odd_banks_martin(int k, std::vector<u32> Q);

    void validate() const;
    std::string name() const;
    bool allows_prime(u64 p) const;
};

ChainId parse_chain(const std::string& name, int k = 1, const std::vector<u32>& Q = {});

inline constexpr u64 kInfinity = std::numeric_limits<u64>::max();

struct Transition {
    u64 target;  // kInfinity for the cemetery state of an upward chain
    double prob;
};

struct TransitionList {
    u64 source = 0;
    std::vector<Transition> entries;
    bool tail_folded = false;  // upward lists: the infinity entry also carries truncated mass

    double sum() const;
};

bool in_state_space(const ChainId& c, u64 n, const FactorTable& t);
bool is_absorbing(const ChainId& c, u64 n, const FactorTable& t);

TransitionList transitions_down(const ChainId& c, u64 n, const FactorTable& t);

// P(m q -> m) for a prime power q = p^k, computed from the factorization of m alone,
// so m q may lie beyond the sieve. Zero when m q is not a parent of m in this chain.
double parent_prob(const ChainId& c, u64 m, const PrimePower& q, const FactorTable& t);

// Prime powers up to Q plus psi(Q), shared across many margin or adjoint queries.
struct ParentCache {
    u64 Q = 0;
    std::vector<PrimePower> prime_powers;
    double psi_Q = 0;
};

ParentCache make_parent_cache(u64 Q, const FactorTable& t);

// Calls f(q, prob) for every parent m*q of m with q <= cache.Q (all of the chain's Q set
// for odd_banks_martin).
template <class F>
void for_each_parent(const ChainId& c, u64 m, const ParentCache& cache, const FactorTable& t, F&& f)
{
    if (c.kind == ChainKind::odd_banks_martin) {
        for (u32 p : c.Q) {
            PrimePower q{p, p, 1, std::log(double(p))};
            double pr = parent_prob(c, m, q, t);
            if (pr > 0) f(q, pr);
        }
        return;
    }
    const bool primes_only = c.kind == ChainKind::random_prime || c.kind == ChainKind::mertens;
    for (const PrimePower& q : cache.prime_powers) {
        if (primes_only && q.k != 1) continue;
        double pr = parent_prob(c, m, q, t);
        if (pr > 0) f(q, pr);
    }
}

struct SubinvarianceReport {
    u64 n = 0;
    double lower = 0;  // bracket of nu(n) - sum_q nu(nq) P(nq -> n)
    double upper = 0;
    u64 truncation_Q = 0;
    double weight = 0;
    double head = 0;      // parent sum over q <= truncation_Q
    double tail_lo = 0;   // bracket of the remaining parent sum
    double tail_hi = 0;
};

SubinvarianceReport subinvariance_margin(const ChainId& c, const Weight& w, u64 n, const ParentCache& cache);
SubinvarianceReport subinvariance_margin(const ChainId& c, const Weight& w, u64 n, u64 trunc_Q);

// sum_{q > Q} nu_Lambda(nq) Lambda(q) / log(nq) by quadrature of
// int_0^inf n^{-1-u}/zeta(1+u) [-zeta'/zeta(1+u) - sum_{q<=Q} Lambda(q) q^{-1-u}] du.
QuadEstimate nu_lambda_parent_tail(u64 n, const ParentCache& cache, double tol, const KernelConfig& cfg = {});

// Residual below this is a sub-invariance violation rather than rounding.
inline constexpr double kViolationTol = 1e-8;

TransitionList adjoint_transitions(const ChainId& c, const Weight& w, u64 n, const ParentCache& cache);
TransitionList adjoint_transitions(const ChainId& c, const Weight& w, u64 n, u64 trunc_Q);

}  // namespace divchain
