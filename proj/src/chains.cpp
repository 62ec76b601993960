#include "divchain/chains.hpp"

#include <algorithm>
#include <cmath>

#include "divchain/error.hpp"
#include "divchain/kernels.hpp"
#include "divchain/quadrature.hpp"

namespace divchain {

namespace {

double beta(u64 p) { return double(p) / double(p - 2); }

// lambda(n) = sum_{p | n} v_p(n) beta_p log p
double obm_lambda(const Factorization& f)
{
    double s = 0;
    for (auto& [p, e] : f.pv) s += e * beta(p) * std::log(double(p));
    return s;
}

void require_state(const ChainId& c, u64 n, const FactorTable& t)
{
    if (!in_state_space(c, n, t))
        throw domain_error(std::to_string(n) + " is not a state of the " + c.name() + " chain");
}

}  // namespace

ChainId ChainId::odd_banks_martin(int k, std::vector<u32> Q)
{
    std::sort(Q.begin(), Q.end());
    Q.erase(std::unique(Q.begin(), Q.end()), Q.end());
    ChainId c{ChainKind::odd_banks_martin, k, std::move(Q)};
    c.validate();
    return c;
}

void ChainId::validate() const
{
    if (kind != ChainKind::odd_banks_martin) return;
    if (k < 1) throw domain_error("odd Banks-Martin chain needs k >= 1");
    if (Q.empty()) throw domain_error("odd Banks-Martin chain needs a nonempty prime set");
    for (u32 p : Q) {
        if (p < 3 || p % 2 == 0) throw domain_error("odd Banks-Martin primes must be odd");
        for (u32 d = 3; d * d <= p; d += 2)
            if (p % d == 0) throw domain_error(std::to_string(p) + " is not prime");
    }
    if (!std::is_sorted(Q.begin(), Q.end())) throw domain_error("prime set must be sorted");
}

std::string ChainId::name() const
{
    switch (kind) {
    case ChainKind::random_prime: return "random_prime";
    case ChainKind::mertens: return "mertens";
    case ChainKind::von_mangoldt: return "von_mangoldt";
    case ChainKind::eps_modified: return "eps_modified";
    case ChainKind::odd_banks_martin: return "odd_banks_martin";
    }
    return "?";
}

bool ChainId::allows_prime(u64 p) const
{
    return std::binary_search(Q.begin(), Q.end(), static_cast<u32>(p));
}

ChainId parse_chain(const std::string& name, int k, const std::vector<u32>& Q)
{
    if (name == "random_prime") return ChainId::random_prime();
    if (name == "mertens") return ChainId::mertens();
    if (name == "von_mangoldt" || name == "vm") return ChainId::von_mangoldt();
    if (name == "eps_modified" || name == "eps") return ChainId::eps_modified();
    if (name == "odd_banks_martin" || name == "obm") return ChainId::odd_banks_martin(k, Q);
    throw domain_error("unknown chain '" + name + "'");
}

double TransitionList::sum() const
{
    CompensatedSum s;
    for (auto& e : entries) s.add(e.prob);
    return s.value();
}

bool in_state_space(const ChainId& c, u64 n, const FactorTable& t)
{
    switch (c.kind) {
    case ChainKind::random_prime:
    case ChainKind::mertens:
    case ChainKind::von_mangoldt: return n >= 1;
    case ChainKind::eps_modified: return n >= 2;
    case ChainKind::odd_banks_martin: {
        if (n < 3 || n % 2 == 0) return false;
        if (n > t.limit()) throw domain_error("state beyond the sieve");
        Factorization f = factorize(n, t);
        for (auto& [p, e] : f.pv)
            if (!c.allows_prime(p)) return false;
        return f.big_omega() >= c.k;
    }
    }
    return false;
}

bool is_absorbing(const ChainId& c, u64 n, const FactorTable& t)
{
    switch (c.kind) {
    case ChainKind::random_prime:
    case ChainKind::mertens:
    case ChainKind::von_mangoldt: return n == 1;
    case ChainKind::eps_modified: return t.is_prime(n);
    case ChainKind::odd_banks_martin: return factorize(n, t).big_omega() == c.k;
    }
    return false;
}

TransitionList transitions_down(const ChainId& c, u64 n, const FactorTable& t)
{
    c.validate();
    if (n > t.limit()) throw domain_error("state beyond the sieve");
    require_state(c, n, t);
    TransitionList out;
    out.source = n;
    if (is_absorbing(c, n, t)) {
        out.entries.push_back({n, 1.0});
        return out;
    }
    const Factorization f = factorize(n, t);
    const double logn = std::log(double(n));
    switch (c.kind) {
    case ChainKind::random_prime:
        for (auto& [p, e] : f.pv) out.entries.push_back({n / p, 1.0 / f.small_omega()});
        break;
    case ChainKind::mertens: out.entries.push_back({n / f.largest_prime(), 1.0}); break;
    case ChainKind::eps_modified:
        if (f.small_omega() == 1) {
            // p^K: the jump to 1 is redirected to p, so P(p^K -> p) = 2/K
            const u64 p = f.pv[0].first;
            const int K = f.pv[0].second;
            u64 target = n;
            for (int j = 1; j <= K - 1; ++j) {
                target /= p;
                out.entries.push_back({target, (j == K - 1 ? 2.0 : 1.0) / K});
            }
            break;
        }
        [[fallthrough]];
    case ChainKind::von_mangoldt:
        for (auto& [p, e] : f.pv) {
            const double w = std::log(double(p)) / logn;
            u64 target = n;
            for (int j = 1; j <= e; ++j) {
                target /= p;
                out.entries.push_back({target, w});
            }
        }
        break;
    case ChainKind::odd_banks_martin: {
        const double lam = obm_lambda(f);
        for (auto& [p, e] : f.pv) out.entries.push_back({n / p, e * beta(p) * std::log(double(p)) / lam});
        break;
    }
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const Transition& a, const Transition& b) { return a.target > b.target; });
    return out;
}

double parent_prob(const ChainId& c, u64 m, const PrimePower& q, const FactorTable& t)
{
    switch (c.kind) {
    case ChainKind::random_prime: {
        if (q.k != 1 || m < 1) return 0;
        Factorization f = factorize(m, t);
        int w = f.small_omega() + (f.v(q.p) == 0 ? 1 : 0);
        return 1.0 / w;
    }
    case ChainKind::mertens:
        if (q.k != 1 || m < 1) return 0;
        return (m == 1 || factorize(m, t).largest_prime() <= q.p) ? 1.0 : 0.0;
    case ChainKind::von_mangoldt:
        if (m < 1) return 0;
        return q.log_p / (std::log(double(m)) + q.k * q.log_p);
    case ChainKind::eps_modified: {
        if (m < 2) return 0;
        u64 base = prime_power_base(m, t);
        if (base == q.p) {
            int i = 0;
            for (u64 r = m; r > 1; r /= base) ++i;
            const int K = i + q.k;
            return (i == 1 ? 2.0 : 1.0) / K;
        }
        return q.log_p / (std::log(double(m)) + q.k * q.log_p);
    }
    case ChainKind::odd_banks_martin: {
        if (q.k != 1 || !c.allows_prime(q.p) || !in_state_space(c, m, t)) return 0;
        Factorization f = factorize(m, t);
        const double bl = beta(q.p) * q.log_p;
        return (f.v(q.p) + 1) * bl / (obm_lambda(f) + bl);
    }
    }
    return 0;
}

ParentCache make_parent_cache(u64 Q, const FactorTable& t)
{
    if (Q < 2) throw domain_error("truncation Q must be >= 2");
    if (Q > t.limit()) throw domain_error("truncation Q exceeds the sieve limit");
    ParentCache c;
    c.Q = Q;
    c.prime_powers = prime_powers_up_to(Q, t);
    c.psi_Q = chebyshev_psi(Q, t);
    return c;
}

QuadEstimate nu_lambda_parent_tail(u64 n, const ParentCache& cache, double tol, const KernelConfig& cfg)
{
    if (n < 1) throw domain_error("n must be positive");
    const double logn = std::log(double(n));
    const double L = logn + std::log(double(cache.Q));
    const double c = psi_ratio_bound(double(cache.Q));
    KernelConfig k = cfg;
    k.target_tol = std::min(cfg.target_tol, 1e-12);
    // integrand in t = u L; beyond T it is at most c (1 + t/L) e^{-t} / (n L)
    auto beyond = [&](double T) { return c * std::exp(-T) * (1.0 + (T + 1.0) / L) / (double(n) * L); };
    double T = 10;
    while (beyond(T) > 0.25 * tol) T += 2;
    auto f = [&](double tt) {
        const double u = tt / L;
        double head = 0;
        for (const PrimePower& q : cache.prime_powers) head += q.log_p * std::exp(-(1.0 + u) * std::log(double(q.q)));
        const double bracket = neg_zeta_log_deriv(1.0 + u, k) - head;
        return std::exp(-(1.0 + u) * logn) / zeta(1.0 + u, k) * bracket / L;
    };
    std::vector<double> breaks{0.0};
    for (double b = 0.5; b < T; b *= 2) breaks.push_back(b);
    breaks.push_back(T);
    QuadResult r = integrate(f, breaks, 0.5 * tol);
    return {r.value, r.error + beyond(T) + 1e-11 / double(n)};
}

SubinvarianceReport subinvariance_margin(const ChainId& c, const Weight& w, u64 n, const ParentCache& cache)
{
    c.validate();
    const FactorTable& t = w.table();
    require_state(c, n, t);
    const WeightKind wk = w.id().kind;
    const bool vm_family = c.kind == ChainKind::von_mangoldt || c.kind == ChainKind::eps_modified;
    const bool supported =
        (c.kind == ChainKind::von_mangoldt &&
         (wk == WeightKind::nu0 || wk == WeightKind::nu_shifted || wk == WeightKind::nu_lambda)) ||
        (c.kind == ChainKind::eps_modified && wk == WeightKind::nu0) ||
        (c.kind == ChainKind::odd_banks_martin && wk == WeightKind::nu0) ||
        (c.kind == ChainKind::mertens && wk == WeightKind::nu_mertens);
    if (!supported)
        throw unsupported_combination("no certified tail bound for chain " + c.name() + " with weight " +
                                      w.id().name());

    SubinvarianceReport r;
    r.n = n;
    r.truncation_Q = c.kind == ChainKind::odd_banks_martin ? c.Q.back() : cache.Q;
    r.weight = w(n);

    CompensatedSum head;
    int terms = 0;
    for_each_parent(c, n, cache, t, [&](const PrimePower& q, double pr) {
        head.add(w.at_product(n, q.q, q.p) * pr);
        ++terms;
    });
    r.head = head.value();

    double value_err = (terms + 1) * w.value_error();
    if (vm_family && wk != WeightKind::nu_lambda) {
        // nu0, nu_p <= 1/(N log N), so the VM tail is dominated by sum Lambda(q)/(nq log^2(nq))
        r.tail_hi = wk == WeightKind::nu_shifted
                        ? lambda_tail_upper_shifted_log(std::log(double(n)), std::log(double(w.id().shift_prime)),
                                                        cache.Q, cache.psi_Q) / double(n)
                        : lambda_tail_upper(n, cache.Q, cache.psi_Q) / double(n);
        if (c.kind == ChainKind::eps_modified && t.is_prime(n)) r.tail_hi += r.weight / (2.0 * double(cache.Q));
    } else if (wk == WeightKind::nu_lambda) {
        QuadEstimate tail = nu_lambda_parent_tail(n, cache, 1e-10, w.kernels());
        r.tail_lo = tail.value - tail.error_bound;
        r.tail_hi = tail.value + tail.error_bound;
    } else if (c.kind == ChainKind::mertens) {
        // telescoping: the primes p > Q with p >= P(n) contribute exactly (e^gamma/n) prod_{l < max(P(n), Q+1)}(1-1/l)
        if (cache.Q >= t.limit()) throw domain_error("Mertens tail needs Q below the sieve limit");
        u64 P = n == 1 ? 2 : factorize(n, t).largest_prime();
        u64 start = std::max<u64>(P, cache.Q + 1);
        auto it = std::lower_bound(t.primes().begin(), t.primes().end(), static_cast<u32>(start));
        if (it == t.primes().end()) throw domain_error("Mertens tail needs a prime beyond Q in the sieve");
        double tail = std::exp(kEulerGamma) / double(n) * t.euler_prefix(static_cast<std::size_t>(it - t.primes().begin()));
        r.tail_lo = r.tail_hi = tail;
    }
    // rounding in the head sum and the weight itself
    const double round = 1e-13 * r.weight + value_err;
    r.upper = r.weight - r.head - r.tail_lo + round;
    r.lower = r.weight - r.head - r.tail_hi - round;
    return r;
}

SubinvarianceReport subinvariance_margin(const ChainId& c, const Weight& w, u64 n, u64 trunc_Q)
{
    return subinvariance_margin(c, w, n, make_parent_cache(trunc_Q, w.table()));
}

TransitionList adjoint_transitions(const ChainId& c, const Weight& w, u64 n, const ParentCache& cache)
{
    c.validate();
    const FactorTable& t = w.table();
    require_state(c, n, t);
    const double wn = w(n);
    TransitionList out;
    out.source = n;
    CompensatedSum total;
    for_each_parent(c, n, cache, t, [&](const PrimePower& q, double pr) {
        double p = w.at_product(n, q.q, q.p) * pr / wn;
        out.entries.push_back({n * q.q, p});
        total.add(p);
    });
    std::sort(out.entries.begin(), out.entries.end(),
              [](const Transition& a, const Transition& b) { return a.target < b.target; });
    const double residual = 1.0 - total.value();
    if (residual < -kViolationTol)
        throw subinvariance_violation("upward probabilities from " + std::to_string(n) + " exceed 1 by " +
                                      std::to_string(-residual));
    out.tail_folded = c.kind != ChainKind::odd_banks_martin;
    out.entries.push_back({kInfinity, std::max(0.0, residual)});
    return out;
}

TransitionList adjoint_transitions(const ChainId& c, const Weight& w, u64 n, u64 trunc_Q)
{
    return adjoint_transitions(c, w, n, make_parent_cache(trunc_Q, w.table()));
}

}  // namespace divchain
