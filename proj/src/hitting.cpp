#include "divchain/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "divchain/error.hpp"
#include "divchain/primitive.hpp"

namespace divchain {

namespace {

MassVector check_support(const ChainId& c, const MassVector& b, u64 X, const FactorTable& t)
{
    if (X > t.limit()) throw domain_error("X exceeds the sieve limit");
    MassVector h = MassVector::zeros(X);
    for (u64 n = 0; n <= std::min(X, b.domain_limit); ++n) {
        double v = b[n];
        if (v == 0) continue;
        if (v < 0) throw domain_error("initial mass must be nonnegative");
        if (n == 0 || !in_state_space(c, n, t))
            throw domain_error("initial mass at " + std::to_string(n) + " lies outside the state space");
        h.at(n) = v;
    }
    for (u64 n = X + 1; n <= b.domain_limit; ++n)
        if (b[n] != 0) throw domain_error("initial mass beyond X");
    return h;
}

long long binomial(int n, int k)
{
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

MassVector MassVector::zeros(u64 X)
{
    MassVector m;
    m.domain_limit = X;
    m.values = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(X + 1));
    return m;
}

MassVector MassVector::unit(u64 X, u64 n)
{
    MassVector m = zeros(X);
    m.at(n) = 1.0;
    return m;
}

double& MassVector::at(u64 n)
{
    if (n > domain_limit) throw domain_error("index beyond mass vector domain");
    return values[static_cast<Eigen::Index>(n)];
}

double erdos_sum(const std::vector<u64>& A, const Weight& w)
{
    CompensatedSum s;
    for (u64 a : A) {
        if (a < 2) throw domain_error("Erdos sums are taken over integers >= 2");
        s.add(w(a));
    }
    return s.value();
}

double erdos_sum(const std::vector<u64>& A, const WeightId& w, const FactorTable& t)
{
    return erdos_sum(A, Weight(w, t));
}

std::vector<double> prime_erdos_sums(u64 N, const std::vector<u64>& checkpoints)
{
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) || (!checkpoints.empty() && checkpoints.back() > N))
        throw domain_error("checkpoints must be ascending and <= N");
    std::vector<u32> primes = primes_up_to(N);
    std::vector<double> out;
    CompensatedSum s;
    std::size_t next = 0;
    for (u32 p : primes) {
        while (next < checkpoints.size() && checkpoints[next] < p) out.push_back(s.value()), ++next;
        s.add(nu0(p));
    }
    while (next < checkpoints.size()) out.push_back(s.value()), ++next;
    return out;
}

MassVector hitting_down(const ChainId& c, const MassVector& b, u64 X, const FactorTable& t, const HitOptions& opt)
{
    c.validate();
    MassVector h = check_support(c, b, X, t);
    for (u64 n = X; n >= 1; --n) {
        const double hn = h[n];
        if (hn == 0 || !in_state_space(c, n, t) || is_absorbing(c, n, t)) continue;
        for (const Transition& tr : transitions_down(c, n, t).entries) h.at(tr.target) += hn * tr.prob;
    }
    if (!opt.report_absorbing)
        for (u64 n = 1; n <= X; ++n)
            if (h[n] != 0 && is_absorbing(c, n, t)) h.at(n) = 0;
    return h;
}

double absorbed_mass(const ChainId& c, const MassVector& h, const FactorTable& t)
{
    CompensatedSum s;
    for (u64 n = 1; n <= h.domain_limit; ++n)
        if (h[n] != 0 && in_state_space(c, n, t) && is_absorbing(c, n, t)) s.add(h[n]);
    return s.value();
}

MassVector hitting_up(const ChainId& c, const Weight& w, const MassVector& b, u64 X)
{
    c.validate();
    const FactorTable& t = w.table();
    MassVector h = check_support(c, b, X, t);
    Eigen::ArrayXd row = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(X + 1));
    for (u64 n = 1; n <= X; ++n) {
        if (!in_state_space(c, n, t) || is_absorbing(c, n, t)) continue;
        const double wn = w(n);
        CompensatedSum acc;
        acc.add(h[n]);
        for (const Transition& tr : transitions_down(c, n, t).entries) {
            const double up = wn * tr.prob / w(tr.target);  // P(m -> n) for the adjoint
            acc.add(h[tr.target] * up);
            row[static_cast<Eigen::Index>(tr.target)] += up;
        }
        h.at(n) = acc.value();
    }
    for (u64 m = 1; m <= X; ++m)
        if (row[static_cast<Eigen::Index>(m)] > 1.0 + kViolationTol)
            throw subinvariance_violation("upward probabilities out of " + std::to_string(m) + " sum to " +
                                          std::to_string(row[static_cast<Eigen::Index>(m)]));
    return h;
}

AdjointSetup adjoint_setup(const std::string& name, u64 X, const FactorTable& t)
{
    if (X < 2 || X > t.limit()) throw domain_error("adjoint setup needs 2 <= X <= sieve limit");
    AdjointSetup s;
    s.b = MassVector::zeros(X);
    if (name == "eps") {
        s.chain = ChainId::eps_modified();
        s.weight = WeightId::nu0();
        for (u32 p : t.primes()) {
            if (p > X) break;
            s.b.at(p) = nu0(p);
        }
    } else if (name == "obm") {
        s.chain = ChainId::odd_banks_martin(2, {3, 5, 7});
        s.weight = WeightId::nu0();
        for (u64 n = 2; n <= X; ++n)
            if (in_state_space(s.chain, n, t) && is_absorbing(s.chain, n, t)) s.b.at(n) = nu0(n);
    } else if (name == "nu2") {
        s.chain = ChainId::von_mangoldt();
        s.weight = WeightId::shifted(2);
        s.b.at(1) = 1.0 / std::log(2.0);
    } else {
        throw domain_error("unknown adjoint setup '" + name + "' (eps, obm, nu2)");
    }
    return s;
}

MassVector mass_1196(u64 x, u64 X, const FactorTable& t)
{
    if (x < 2 || x > X || X > t.limit()) throw domain_error("mass_1196 needs 2 <= x <= X <= sieve limit");
    const std::vector<PrimePower> pp = prime_powers_up_to(std::max<u64>(X / x, 2), t);
    MassVector b = MassVector::zeros(X);
    for (u64 n = x; n <= X; ++n) {
        CompensatedSum s;
        s.add(nu0(n));
        const u64 qmax = X / n;
        for (const PrimePower& q : pp) {
            if (q.q > qmax) break;
            const double N = double(n) * double(q.q), lN = std::log(N);
            s.add(-q.log_p / (N * lN * lN));
        }
        double v = s.value();
        if (v < -1e-12) throw verification_error("negative initial mass at " + std::to_string(n));
        b.at(n) = std::max(v, 0.0);
    }
    return b;
}

double bound_1196(u64 x, u64 X, const FactorTable& t)
{
    if (x < 2 || x > X || X > t.limit()) throw domain_error("bound_1196 needs 2 <= x <= X <= sieve limit");
    CompensatedSum s;
    // r = q j with x <= r <= X and j = r/q < x
    for (const PrimePower& q : prime_powers_up_to(X, t)) {
        const u64 jlo = std::max<u64>(1, (x + q.q - 1) / q.q);
        const u64 jhi = std::min<u64>(x - 1, X / q.q);
        for (u64 j = jlo; j <= jhi; ++j) {
            const double r = double(q.q) * double(j), lr = std::log(r);
            s.add(q.log_p / (r * lr * lr));
        }
    }
    return s.value();
}

std::map<u64, Rational> lym_masses(u64 n0, const FactorTable& t)
{
    if (n0 < 1 || n0 > t.limit()) throw domain_error("n0 outside the sieve");
    Factorization f = factorize(n0, t);
    for (auto& [p, e] : f.pv)
        if (e > 1) throw domain_error("n0 must be squarefree");
    if (f.small_omega() > 12) throw domain_error("at most 12 prime factors supported");
    std::vector<u64> divs = divisors(n0, t);
    std::map<u64, Rational> h;
    for (u64 d : divs) h[d] = Rational(0);
    h[n0] = Rational(1);
    for (auto it = divs.rbegin(); it != divs.rend(); ++it) {
        const u64 n = *it;
        if (n == 1) continue;
        Factorization fn = factorize(n, t);
        const Rational share = h[n] / Rational(fn.small_omega());
        for (auto& [p, e] : fn.pv) h[n / p] += share;
    }
    return h;
}

SpernerCheck sperner_check(const std::vector<u64>& A, u64 n0, const FactorTable& t)
{
    Factorization f = factorize(n0, t);
    for (auto& [p, e] : f.pv)
        if (e > 1) throw domain_error("n0 must be squarefree");
    const int N = f.small_omega();
    SpernerCheck r;
    r.bound = static_cast<std::size_t>(binomial(N, N / 2));
    for (u64 a : normalize_set(A)) {
        if (a == 0 || n0 % a != 0) continue;
        ++r.count;
        r.lym_sum += Rational(1, binomial(N, factorize(a, t).big_omega()));
    }
    return r;
}

CutCapacity cut_capacity(const ChainId& c, const Weight& w, const std::vector<u64>& S_in, const std::vector<u64>& A_in)
{
    const FactorTable& t = w.table();
    const std::vector<u64> S = normalize_set(S_in);
    const std::vector<u64> A = normalize_set(A_in);
    if (!A.empty() && !is_primitive(A)) throw domain_error("A is not primitive");
    auto inS = [&](u64 m) { return std::binary_search(S.begin(), S.end(), m); };
    CutCapacity r;
    CompensatedSum lhs, rhs;
    for (u64 n : S) {
        if (!in_state_space(c, n, t) || is_absorbing(c, n, t))
            throw domain_error("S must consist of non-absorbing states");
        const double wn = w(n);
        if (std::binary_search(A.begin(), A.end(), n)) lhs.add(wn);
        CompensatedSum out;
        for (const Transition& tr : transitions_down(c, n, t).entries)
            if (!inS(tr.target)) out.add(tr.prob);
        rhs.add(wn * out.value());
    }
    r.lhs = lhs.value();
    r.rhs = rhs.value();
    return r;
}

FlowDivergence flow_divergence(u64 n, const ParentCache& cache, const FactorTable& t)
{
    if (n < 2) throw domain_error("flow divergence needs n >= 2");
    FlowDivergence r;
    const double ln = std::log(double(n));
    CompensatedSum out;
    for (const Transition& tr : transitions_down(ChainId::von_mangoldt(), n, t).entries)
        out.add(tr.prob / (double(n) * ln));
    r.outflow = out.value();
    CompensatedSum in;
    for (const PrimePower& q : cache.prime_powers) {
        const double N = double(n) * double(q.q), lN = std::log(N);
        in.add(q.log_p / (N * lN * lN));
    }
    r.inflow_lo = in.value();
    r.inflow_hi = r.inflow_lo + lambda_tail_upper(n, cache.Q, cache.psi_Q) / double(n);
    return r;
}

FlowDivergence flow_divergence(u64 n, u64 trunc_Q, const FactorTable& t)
{
    return flow_divergence(n, make_parent_cache(trunc_Q, t), t);
}

}  // namespace divchain
