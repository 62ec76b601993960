#pragma once

#include <functional>
#include <string>
#include <vector>

#include "divchain/chains.hpp"
#include "divchain/rng.hpp"

namespace divchain {

enum class PathEnd { absorbed, infinity, cap };

struct ChainPath {
    std::vector<u64> states;
    PathEnd end = PathEnd::absorbed;
    u64 seed = 0;
    u64 stream = 0;
};

// Downward path from n0 until an absorbing state; trial i of an estimator uses stream i.
ChainPath sample_down(const ChainId& c, u64 n0, u64 seed, const FactorTable& t, u64 stream = 0);

// Upward path of the adjoint chain from n0. Stops at infinity (which also absorbs the
// truncated parent mass) or when the next state would exceed cap.
ChainPath sample_up(const ChainId& c, const Weight& w, u64 n0, u64 cap, const ParentCache& cache, u64 seed,
                    u64 stream = 0);

struct Estimate {
    double p_hat = 0;
    double stderr_ = 0;
    u64 hits = 0;
    u64 trials = 0;
    double bias_bound = 0;
};

// Fraction of downward paths from n0 visiting target, with binomial standard error.
Estimate estimate_hit(const ChainId& c, u64 n0, const std::vector<u64>& target, u64 trials, u64 seed,
                      const FactorTable& t, int threads = 1);

struct ZetaProcessConfig {
    double s = 2.0;
    u64 P_max = 10000;
    double bias_bound = 0;  // total variation distance of the truncated law from the zeta law
};

// Fills bias_bound = 1 - 1/(zeta(s) prod_{p <= P_max} (1 - p^{-s})).
ZetaProcessConfig make_zeta_config(double s, u64 P_max = 10000, const KernelConfig& kc = {});

// Per-prime exponential clocks E_{p,k} of rate log p, restricted to p <= P_max.
// Z_s = prod p^{e_{p,s}} with e_{p,s} = max{k : E_{p,1}, ..., E_{p,k} >= s}.
class ZetaProcess {
public:
    explicit ZetaProcess(u64 P_max);

    u64 P_max() const { return P_max_; }

    // One draw of Z_s; saturates at UINT64_MAX on overflow.
    u64 sample(double s, Philox& rng) const;

    // True when the coupled path {Z_s : s > 1} passes through n.
    bool visits(u64 n, const Factorization& f, Philox& rng) const;

private:
    u64 P_max_;
    std::vector<std::vector<u32>> blocks_;  // primes in [2^j, 2^{j+1})
};

u64 zeta_process_sample(const ZetaProcessConfig& cfg, u64 seed, u64 stream = 0);

// Empirical law of Z_s at n = 1..n_max (index 0 holds the mass above n_max).
std::vector<u64> zeta_process_counts(const ZetaProcessConfig& cfg, u64 n_max, u64 draws, u64 seed, int threads = 1);

// Visit frequency of n by the truncated process. bias_bound carries the truncation bias
// int_1^inf log n n^{-s} [prod_{p <= P_max}(1 - p^{-s}) - 1/zeta(s)] ds, which is >= 0.
Estimate zeta_process_hitting(u64 n, u64 P_max, u64 trials, u64 seed, const FactorTable& t, int threads = 1,
                              const KernelConfig& kc = {});

double zeta_hitting_bias(u64 n, u64 P_max, const KernelConfig& kc = {});

// Multiplicative simple random walk with w(p^j) = p^{-js}/Z, p <= x.
struct MsrwLaw {
    u64 x = 0;
    double s = 0;
    double Z = 0;
    double higher_power_mass = 0;  // sum_{p <= x} 1/(p^s (p^s - 1))
    double truncated_mass = 0;     // 1 - sum of listed probabilities
    TransitionList steps;          // targets are the multipliers p^j
};

double msrw_default_s(u64 x);
MsrwLaw msrw_transitions(u64 x, double s);

// n^{-s} k!/Z^k where n = m q_1...q_k with m x-rough and q_i coprime powers of primes <= x.
double msrw_hit_lower(u64 n, const MsrwLaw& law, const FactorTable& t);

// sum_{n in A, y/x <= n <= y} 1/(n P(X = omega_{<=x}(n))) with X Poisson of rate Z.
double lym_statistic(const std::vector<u64>& A, u64 y, const MsrwLaw& law, const FactorTable& t);

// Upward walk from m until the state would exceed cap.
ChainPath sample_msrw(const MsrwLaw& law, u64 m, u64 cap, u64 seed, u64 stream = 0);

struct DensityStats {
    std::vector<u64> x_list;
    std::vector<double> mean_X;
    std::vector<double> second_moment_X;
    std::vector<double> stderr_;
    std::vector<double> exact_mean_X;  // sum_{n in A, n <= x} nu_Lambda(n) / log log x
    u64 trials = 0;
    u64 escapes = 0;  // paths that left [1, trunc_X] or went to infinity
};

// Upward von Mangoldt adjoint chain for nu_Lambda from n0 = 1, simulated inside [1, trunc_X].
DensityStats chain_density_stats(const std::function<bool(u64)>& A, std::vector<u64> x_list, u64 trials,
                                 u64 trunc_X, u64 seed, const FactorTable& t, const KernelConfig& kc = {},
                                 int threads = 1);

}  // namespace divchain
