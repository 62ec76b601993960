#include "divchain/stochastic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "divchain/error.hpp"
#include "divchain/parallel.hpp"
#include "divchain/primitive.hpp"
#include "divchain/quadrature.hpp"

namespace divchain {

namespace {

constexpr u64 kChunk = 4096;

u64 pick(const TransitionList& list, double u)
{
    double acc = 0;
    for (const Transition& tr : list.entries) {
        acc += tr.prob;
        if (u < acc) return tr.target;
    }
    return list.entries.back().target;
}

u64 saturating_mul(u64 a, u64 b)
{
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) return std::numeric_limits<u64>::max();
    return r;
}

// Index skip to the next success of independent Bernoulli(r) trials.
double geometric_skip(Philox& rng, double log1m_r)
{
    return std::floor(std::log(rng.uniform_pos()) / log1m_r);
}

}  // namespace

ChainPath sample_down(const ChainId& c, u64 n0, u64 seed, const FactorTable& t, u64 stream)
{
    c.validate();
    if (n0 == 0 || !in_state_space(c, n0, t)) throw domain_error("start state outside the state space");
    Philox rng(seed, stream);
    ChainPath path;
    path.seed = seed;
    path.stream = stream;
    u64 n = n0;
    path.states.push_back(n);
    while (!is_absorbing(c, n, t)) {
        n = pick(transitions_down(c, n, t), rng.uniform());
        path.states.push_back(n);
    }
    path.end = PathEnd::absorbed;
    return path;
}

ChainPath sample_up(const ChainId& c, const Weight& w, u64 n0, u64 cap, const ParentCache& cache, u64 seed,
                    u64 stream)
{
    c.validate();
    const FactorTable& t = w.table();
    if (n0 == 0 || !in_state_space(c, n0, t)) throw domain_error("start state outside the state space");
    Philox rng(seed, stream);
    ChainPath path;
    path.seed = seed;
    path.stream = stream;
    u64 n = n0;
    path.states.push_back(n);
    for (;;) {
        const u64 next = pick(adjoint_transitions(c, w, n, cache), rng.uniform());
        if (next == kInfinity) {
            path.end = PathEnd::infinity;
            break;
        }
        if (next > cap) {
            path.end = PathEnd::cap;
            break;
        }
        n = next;
        path.states.push_back(n);
    }
    return path;
}

Estimate estimate_hit(const ChainId& c, u64 n0, const std::vector<u64>& target_in, u64 trials, u64 seed,
                      const FactorTable& t, int threads)
{
    c.validate();
    if (trials < 1) throw domain_error("trials must be >= 1");
    if (n0 == 0 || !in_state_space(c, n0, t)) throw domain_error("start state outside the state space");
    const std::vector<u64> target = normalize_set(target_in);
    auto is_target = [&](u64 n) { return std::binary_search(target.begin(), target.end(), n); };
    auto reachable = [&](u64 n) {
        for (u64 a : target)
            if (a != 0 && n % a == 0) return true;
        return false;
    };

    const u64 chunks = (trials + kChunk - 1) / kChunk;
    std::vector<u64> hits(chunks, 0);
    parallel_chunks(trials, kChunk, threads, [&](u64 chunk, u64 begin, u64 end) {
        std::unordered_map<u64, TransitionList> memo;
        u64 h = 0;
        for (u64 i = begin; i < end; ++i) {
            Philox rng(seed, i);
            u64 n = n0;
            for (;;) {
                if (is_target(n)) {
                    ++h;
                    break;
                }
                if (!reachable(n) || is_absorbing(c, n, t)) break;
                auto it = memo.find(n);
                if (it == memo.end()) it = memo.emplace(n, transitions_down(c, n, t)).first;
                n = pick(it->second, rng.uniform());
            }
        }
        hits[chunk] = h;
    });
    Estimate e;
    e.trials = trials;
    for (u64 h : hits) e.hits += h;
    e.p_hat = double(e.hits) / double(trials);
    e.stderr_ = std::sqrt(e.p_hat * (1 - e.p_hat) / double(trials));
    return e;
}

ZetaProcessConfig make_zeta_config(double s, u64 P_max, const KernelConfig& kc)
{
    if (!(s > 1)) throw domain_error("zeta process needs s > 1");
    if (P_max < 2) throw domain_error("P_max must be >= 2");
    ZetaProcessConfig cfg;
    cfg.s = s;
    cfg.P_max = P_max;
    double log_euler = 0;
    for (u32 p : primes_up_to(P_max)) log_euler += std::log1p(-std::pow(double(p), -s));
    cfg.bias_bound = std::max(0.0, -std::expm1(-std::log(zeta(s, kc)) - log_euler));
    return cfg;
}

ZetaProcess::ZetaProcess(u64 P_max) : P_max_(P_max)
{
    if (P_max < 2) throw domain_error("P_max must be >= 2");
    for (u32 p : primes_up_to(P_max)) {
        const std::size_t j = static_cast<std::size_t>(std::bit_width(p) - 1);
        if (blocks_.size() <= j) blocks_.resize(j + 1);
        blocks_[j].push_back(p);
    }
}

u64 ZetaProcess::sample(double s, Philox& rng) const
{
    if (!(s > 1)) throw domain_error("zeta process needs s > 1");
    u64 result = 1;
    // Block j holds primes in [2^j, 2^{j+1}); candidates arrive at rate 2^{-js} and are kept
    // with probability (2^j/p)^s, so each prime fires with probability p^{-s}.
    for (std::size_t j = 1; j < blocks_.size(); ++j) {
        const std::vector<u32>& B = blocks_[j];
        const double r = std::exp(-s * double(j) * std::log(2.0));
        if (r < 1e-300) break;
        const double l1m = std::log1p(-r);
        const double lo = std::ldexp(1.0, static_cast<int>(j));
        double idx = -1;
        for (;;) {
            idx += 1 + geometric_skip(rng, l1m);
            if (idx >= double(B.size())) break;
            const u32 p = B[static_cast<std::size_t>(idx)];
            if (rng.uniform() >= std::pow(lo / p, s)) continue;
            const double ps = std::pow(double(p), -s);
            u64 pe = p;
            while (rng.uniform() < ps) pe = saturating_mul(pe, p);
            result = saturating_mul(result, pe);
        }
    }
    return result;
}

bool ZetaProcess::visits(u64 n, const Factorization& f, Philox& rng) const
{
    double hi = std::numeric_limits<double>::infinity(), lo = 1.0;
    for (auto& [p, a] : f.pv) {
        if (p > P_max_) throw domain_error("n has a prime factor above P_max");
        const double rate = std::log(double(p));
        double m = std::numeric_limits<double>::infinity();
        for (int k = 0; k < a; ++k) m = std::min(m, rng.exponential(rate));
        hi = std::min(hi, m);
        lo = std::max(lo, std::min(m, rng.exponential(rate)));
    }
    // primes not dividing n must have E_{p,1} < s; only clocks above 1 matter
    for (std::size_t j = 1; j < blocks_.size(); ++j) {
        const std::vector<u32>& B = blocks_[j];
        const double lo_j = std::ldexp(1.0, static_cast<int>(j));
        const double l1m = std::log1p(-1.0 / lo_j);
        double idx = -1;
        for (;;) {
            idx += 1 + geometric_skip(rng, l1m);
            if (idx >= double(B.size())) break;
            const u32 p = B[static_cast<std::size_t>(idx)];
            if (rng.uniform() >= lo_j / p) continue;
            const double E = 1.0 + rng.exponential(std::log(double(p)));
            if (n % p != 0) lo = std::max(lo, E);
        }
    }
    return hi > lo;
}

u64 zeta_process_sample(const ZetaProcessConfig& cfg, u64 seed, u64 stream)
{
    ZetaProcess zp(cfg.P_max);
    Philox rng(seed, stream);
    return zp.sample(cfg.s, rng);
}

std::vector<u64> zeta_process_counts(const ZetaProcessConfig& cfg, u64 n_max, u64 draws, u64 seed, int threads)
{
    if (draws < 1) throw domain_error("draws must be >= 1");
    ZetaProcess zp(cfg.P_max);
    const u64 chunks = (draws + kChunk - 1) / kChunk;
    std::vector<std::vector<u64>> part(chunks, std::vector<u64>(n_max + 1, 0));
    parallel_chunks(draws, kChunk, threads, [&](u64 chunk, u64 begin, u64 end) {
        for (u64 i = begin; i < end; ++i) {
            Philox rng(seed, i);
            const u64 z = zp.sample(cfg.s, rng);
            ++part[chunk][z <= n_max ? z : 0];
        }
    });
    std::vector<u64> out(n_max + 1, 0);
    for (auto& p : part)
        for (u64 i = 0; i <= n_max; ++i) out[i] += p[i];
    return out;
}

double zeta_hitting_bias(u64 n, u64 P_max, const KernelConfig& kc)
{
    if (n < 2) throw domain_error("n must be >= 2");
    const std::vector<u32> primes = primes_up_to(P_max);
    std::vector<double> logs(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) logs[i] = std::log(double(primes[i]));
    const double ln = std::log(double(n)), LP = std::log(double(std::max<u64>(P_max, 2)));
    auto g = [&](double v) {
        const double s = 1 + v;
        double le = 0;
        for (double lp : logs) le += std::log1p(-std::exp(-s * lp));
        return ln * std::exp(-s * ln) * (std::exp(le) - 1.0 / zeta(s, kc));
    };
    // the bracket changes scale at v ~ 1/log P_max; beyond v = 60/log n the weight n^{-s} is negligible
    std::vector<double> breaks{0.0};
    const double vmax = 60.0 / ln;
    for (double b = 0.0625 / LP; b < vmax; b *= 2) breaks.push_back(b);
    breaks.push_back(vmax);
    QuadResult q = integrate(g, breaks, 1e-13);
    return std::max(0.0, q.value + q.error + std::exp(-vmax * ln));
}

Estimate zeta_process_hitting(u64 n, u64 P_max, u64 trials, u64 seed, const FactorTable& t, int threads,
                              const KernelConfig& kc)
{
    if (n < 2) throw domain_error("n must be >= 2");
    if (trials < 1) throw domain_error("trials must be >= 1");
    const Factorization f = factorize(n, t);
    if (f.largest_prime() > P_max) throw domain_error("n has a prime factor above P_max");
    ZetaProcess zp(P_max);
    const u64 chunks = (trials + kChunk - 1) / kChunk;
    std::vector<u64> hits(chunks, 0);
    parallel_chunks(trials, kChunk, threads, [&](u64 chunk, u64 begin, u64 end) {
        u64 h = 0;
        for (u64 i = begin; i < end; ++i) {
            Philox rng(seed, i);
            h += zp.visits(n, f, rng) ? 1 : 0;
        }
        hits[chunk] = h;
    });
    Estimate e;
    e.trials = trials;
    for (u64 h : hits) e.hits += h;
    e.p_hat = double(e.hits) / double(trials);
    e.stderr_ = std::sqrt(e.p_hat * (1 - e.p_hat) / double(trials));
    e.bias_bound = zeta_hitting_bias(n, P_max, kc);
    return e;
}

double msrw_default_s(u64 x)
{
    if (x < 3) throw domain_error("x must be >= 3");
    return 1.0 - 1.0 / (10.0 * std::log(double(x)));
}

MsrwLaw msrw_transitions(u64 x, double s)
{
    if (x < 3) throw domain_error("x must be >= 3");
    if (!(s > 0)) throw domain_error("s must be positive");
    MsrwLaw law;
    law.x = x;
    law.s = s;
    const std::vector<u32> primes = primes_up_to(x);
    CompensatedSum Z, hp;
    for (u32 p : primes) {
        const double ps = std::pow(double(p), -s);
        Z.add(ps / (1 - ps));
        hp.add(ps * ps / (1 - ps));
    }
    law.Z = Z.value();
    law.higher_power_mass = hp.value();
    law.steps.source = 1;
    CompensatedSum listed;
    for (u32 p : primes) {
        const double ps = std::pow(double(p), -s);
        double term = ps;
        u64 q = p;
        for (;;) {
            const double prob = term / law.Z;
            listed.add(prob);
            law.steps.entries.push_back({q, prob});
            if (prob < 1e-20 || q > (u64(1) << 62) / p) break;
            q *= p;
            term *= ps;
        }
    }
    std::sort(law.steps.entries.begin(), law.steps.entries.end(),
              [](const Transition& a, const Transition& b) { return a.target < b.target; });
    law.truncated_mass = 1.0 - listed.value();
    return law;
}

double msrw_hit_lower(u64 n, const MsrwLaw& law, const FactorTable& t)
{
    if (n < 1) throw domain_error("n must be >= 1");
    int k = 0;
    for (auto& [p, e] : factorize(n, t).pv)
        if (p <= law.x) ++k;
    return std::exp(-law.s * std::log(double(n)) + std::lgamma(k + 1.0) - k * std::log(law.Z));
}

double lym_statistic(const std::vector<u64>& A, u64 y, const MsrwLaw& law, const FactorTable& t)
{
    CompensatedSum s;
    for (u64 n : normalize_set(A)) {
        if (n > y || n * law.x < y) continue;
        int k = 0;
        for (auto& [p, e] : factorize(n, t).pv)
            if (p <= law.x) ++k;
        const double log_poisson = -law.Z + k * std::log(law.Z) - std::lgamma(k + 1.0);
        s.add(std::exp(-log_poisson) / double(n));
    }
    return s.value();
}

ChainPath sample_msrw(const MsrwLaw& law, u64 m, u64 cap, u64 seed, u64 stream)
{
    if (m < 1) throw domain_error("start must be >= 1");
    Philox rng(seed, stream);
    ChainPath path;
    path.seed = seed;
    path.stream = stream;
    u64 n = m;
    path.states.push_back(n);
    for (;;) {
        const u64 q = pick(law.steps, rng.uniform());
        if (q > cap / n) break;
        n *= q;
        path.states.push_back(n);
    }
    path.end = PathEnd::cap;
    return path;
}

DensityStats chain_density_stats(const std::function<bool(u64)>& A, std::vector<u64> x_list, u64 trials,
                                 u64 trunc_X, u64 seed, const FactorTable& t, const KernelConfig& kc, int threads)
{
    if (x_list.empty() || !std::is_sorted(x_list.begin(), x_list.end()) || x_list.front() < 3)
        throw domain_error("thresholds must be ascending and >= 3");
    if (trunc_X < x_list.back() || trunc_X > t.limit()) throw domain_error("trunc_X must cover the thresholds and fit the sieve");
    if (trials < 2) throw domain_error("trials must be >= 2");
    const std::size_t J = x_list.size();
    const Weight nu(WeightId::lambda(1e-12), t, kc, trunc_X);
    const std::vector<PrimePower> pp = prime_powers_up_to(trunc_X, t);
    std::vector<double> llx(J);
    for (std::size_t j = 0; j < J; ++j) llx[j] = std::log(std::log(double(x_list[j])));

    const u64 chunk = 1024, chunks = (trials + chunk - 1) / chunk;
    std::vector<std::vector<double>> s1(chunks, std::vector<double>(J, 0)), s2 = s1;
    std::vector<u64> esc(chunks, 0);
    parallel_chunks(trials, chunk, threads, [&](u64 c, u64 begin, u64 end) {
        std::vector<u64> count(J);
        for (u64 i = begin; i < end; ++i) {
            Philox rng(seed, i);
            std::fill(count.begin(), count.end(), 0);
            u64 n = 1;
            auto record = [&](u64 m) {
                if (!A(m)) return;
                for (std::size_t j = 0; j < J; ++j)
                    if (m <= x_list[j]) ++count[j];
            };
            record(n);
            for (;;) {
                const double u = rng.uniform(), inv = 1.0 / nu(n);
                double acc = 0;
                u64 next = 0;
                for (const PrimePower& q : pp) {
                    const u64 m = n * q.q;
                    if (m > trunc_X) break;
                    acc += nu(m) * q.log_p / std::log(double(m)) * inv;
                    if (u < acc) {
                        next = m;
                        break;
                    }
                }
                if (next == 0) {
                    ++esc[c];
                    break;
                }
                n = next;
                record(n);
            }
            for (std::size_t j = 0; j < J; ++j) {
                const double X = double(count[j]) / llx[j];
                s1[c][j] += X;
                s2[c][j] += X * X;
            }
        }
    });

    DensityStats st;
    st.x_list = x_list;
    st.trials = trials;
    st.mean_X.assign(J, 0);
    st.second_moment_X.assign(J, 0);
    st.stderr_.assign(J, 0);
    st.exact_mean_X.assign(J, 0);
    for (u64 c = 0; c < chunks; ++c) {
        st.escapes += esc[c];
        for (std::size_t j = 0; j < J; ++j) st.mean_X[j] += s1[c][j], st.second_moment_X[j] += s2[c][j];
    }
    const double T = double(trials);
    for (std::size_t j = 0; j < J; ++j) {
        st.mean_X[j] /= T;
        st.second_moment_X[j] /= T;
        const double var = std::max(0.0, (st.second_moment_X[j] - st.mean_X[j] * st.mean_X[j]) * T / (T - 1));
        st.stderr_[j] = std::sqrt(var / T);
    }
    CompensatedSum exact;
    std::size_t j = 0;
    for (u64 n = 1; n <= x_list.back(); ++n) {
        if (A(n)) exact.add(nu(n));
        while (j < J && x_list[j] == n) st.exact_mean_X[j] = exact.value() / llx[j], ++j;
    }
    return st;
}

}  // namespace divchain
