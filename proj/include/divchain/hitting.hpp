#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/rational.hpp>

#include "divchain/chains.hpp"

namespace divchain {

// Dense mass on [0, X]; index n holds the mass at n.
struct MassVector {
    u64 domain_limit = 0;
    Eigen::ArrayXd values;

    static MassVector zeros(u64 X);
    static MassVector unit(u64 X, u64 n);

    double operator[](u64 n) const { return n <= domain_limit ? values[static_cast<Eigen::Index>(n)] : 0.0; }
    double& at(u64 n);
    double total() const { return values.sum(); }
};

double erdos_sum(const std::vector<u64>& A, const Weight& w);
double erdos_sum(const std::vector<u64>& A, const WeightId& w, const FactorTable& t);

// sum_{p <= N} 1/(p log p) sampled at each checkpoint (ascending, last one <= N).
std::vector<double> prime_erdos_sums(u64 N, const std::vector<u64>& checkpoints);

struct HitOptions {
    bool report_absorbing = true;
};

// h(n) = b(n) + sum_{q >= 2, nq <= X} h(nq) P(nq -> n), one pass from X down to 1.
MassVector hitting_down(const ChainId& c, const MassVector& b, u64 X, const FactorTable& t,
                        const HitOptions& opt = {});

// Total mass sitting in absorbing states, which equals b.total() for any downward pass.
double absorbed_mass(const ChainId& c, const MassVector& h, const FactorTable& t);

// h(n) = b(n) + sum h(n/q) nu(n) P(n -> n/q) / nu(n/q), one pass from 1 up to X.
// Upward row sums restricted to targets <= X are checked against 1 + kViolationTol.
MassVector hitting_up(const ChainId& c, const Weight& w, const MassVector& b, u64 X);

// Initial masses whose upward hitting mass reproduces the weight:
//   "eps": eps_modified with nu0, b = nu0 on primes <= X;
//   "obm": odd_banks_martin k = 2, Q = {3,5,7} with nu0, b = nu0 on N_2(Q);
//   "nu2": von_mangoldt with nu_2(n) = 1/(n log 2n), b(1) = 1/log 2.
struct AdjointSetup {
    ChainId chain;
    WeightId weight;
    MassVector b;
};

AdjointSetup adjoint_setup(const std::string& name, u64 X, const FactorTable& t);

// b(n) = nu0(n) - sum_{2 <= q <= X/n} nu0(nq) Lambda(q)/log(nq) on [x, X].
MassVector mass_1196(u64 x, u64 X, const FactorTable& t);

// sum_{x <= r <= X} (1 / (r log^2 r)) sum_{q | r, r/q < x} Lambda(q)
double bound_1196(u64 x, u64 X, const FactorTable& t);

using Rational = boost::rational<long long>;

// Exact hitting masses of the random-prime chain started from a unit mass at squarefree n0.
std::map<u64, Rational> lym_masses(u64 n0, const FactorTable& t);

struct SpernerCheck {
    std::size_t count = 0;       // #{a in A : a | n0}
    std::size_t bound = 0;       // C(N, floor(N/2))
    Rational lym_sum{0};         // sum of 1/C(N, Omega(a)) over those a
    bool holds() const { return count <= bound && lym_sum <= Rational(1); }
};

SpernerCheck sperner_check(const std::vector<u64>& A, u64 n0, const FactorTable& t);

struct CutCapacity {
    double lhs = 0;
    double rhs = 0;
};

// lhs = sum_{A cap S} nu;  rhs = sum_{n in S} nu(n) sum_{m | n, m not in S} P(n -> m).
CutCapacity cut_capacity(const ChainId& c, const Weight& w, const std::vector<u64>& S, const std::vector<u64>& A);

struct FlowDivergence {
    double inflow_lo = 0;
    double inflow_hi = 0;
    double outflow = 0;
};

// Flow w(nq -> n) = Lambda(q) / (nq log^2(nq)) of the von Mangoldt chain weighted by nu0.
FlowDivergence flow_divergence(u64 n, const ParentCache& cache, const FactorTable& t);
FlowDivergence flow_divergence(u64 n, u64 trunc_Q, const FactorTable& t);

}  // namespace divchain
