#include "divchain/certify.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include <boost/math/special_functions/trigamma.hpp>

#include "divchain/error.hpp"

namespace divchain {

namespace {

// theta(x) < 1.01624 x for all x > 0 and theta(x) > x (1 - 1/log x) for x >= 41 (Rosser-Schoenfeld).
constexpr double kThetaRatioUpper = 1.01624;
constexpr u64 kThetaLowerFrom = 41;

// Enclosures for smaller cutoffs contain this one, so replay accepts any P_cut up to it.
constexpr u64 kReplayPCut = 1000000;

// Truncation point for the infinite prime sums in the grid checks.
constexpr u64 kGridQ = 1000000;

struct PrimeContext {
    std::vector<u32> primes;
    std::vector<double> log_primes;
    std::vector<PrimePower> prime_powers;
    double psi_Q = 0;
    double theta_Q = 0;
};

const PrimeContext& grid_context()
{
    static const PrimeContext ctx = [] {
        PrimeContext c;
        c.primes = primes_up_to(kGridQ);
        CompensatedSum psi, theta;
        for (u32 p : c.primes) {
            const double lp = std::log(double(p));
            c.log_primes.push_back(lp);
            theta.add(lp);
            for (u64 q = p; q <= kGridQ; q *= p) {
                c.prime_powers.push_back({q, p, 0, lp});
                psi.add(lp);
            }
        }
        std::sort(c.prime_powers.begin(), c.prime_powers.end(),
                  [](const PrimePower& a, const PrimePower& b) { return a.q < b.q; });
        c.psi_Q = psi.value();
        c.theta_Q = theta.value();
        return c;
    }();
    return ctx;
}

// Upper bound for sum_{p > P} 2 log p / (p (p-2)) by partial summation against theta.
double om2_prime_tail(u64 P, double theta_P)
{
    const double Pd = double(P);
    const double g = 2.0 / (Pd * (Pd - 2.0));
    const double integral = std::log(Pd / (Pd - 2.0));
    return (kThetaRatioUpper * Pd - theta_P) * g + kThetaRatioUpper * integral;
}

std::vector<double> grid_points(const GridSpec& g)
{
    if (!(g.lo < g.hi) || g.points < 2) throw domain_error("grid needs lo < hi and at least 2 points");
    std::vector<double> xs(static_cast<std::size_t>(g.points));
    for (int i = 0; i < g.points; ++i) xs[static_cast<std::size_t>(i)] = g.lo + (g.hi - g.lo) * i / (g.points - 1);
    return xs;
}

void check(GridReport& r, double lhs, double rhs)
{
    const double d = lhs - rhs;
    r.max_violation = std::max(r.max_violation, d);
    if (d > r.tolerance) ++r.violations;
}

// log m times the rigorous upper bound for sum_q Lambda(q)/(q log^2(mq)), m = 2^x.
double sharp_lhs(double x)
{
    const PrimeContext& c = grid_context();
    const double lm = x * std::log(2.0);
    CompensatedSum s;
    for (const PrimePower& q : c.prime_powers) {
        const double L = lm + std::log(double(q.q));
        s.add(q.log_p / (double(q.q) * L * L));
    }
    return lm * (s.value() + lambda_tail_upper_log(lm, kGridQ, c.psi_Q));
}

double sharp2_lhs(double x)
{
    const PrimeContext& c = grid_context();
    const double lm = x * std::log(2.0), l2 = std::log(2.0);
    CompensatedSum s;
    for (const PrimePower& q : c.prime_powers) {
        const double L = lm + std::log(double(q.q));
        s.add(q.log_p / (double(q.q) * L * (L + l2)));
    }
    return s.value() + lambda_tail_upper_log(lm, kGridQ, c.psi_Q);
}

// u sum_{p >= 3} log p / ((p-2) p^u), written as u [P'(1+u) - log 2 / 2^{1+u} + sum 2 log p/(p(p-2)p^u)]
// so the slowly convergent part is the prime zeta derivative.
double om2_lhs(double u, const KernelConfig& kc)
{
    const PrimeContext& c = grid_context();
    CompensatedSum s;
    s.add(prime_log_sum(1 + u, kc));
    s.add(-std::log(2.0) * std::exp2(-1 - u));
    for (std::size_t i = 1; i < c.primes.size(); ++i) {
        const double p = double(c.primes[i]);
        s.add(2 * c.log_primes[i] / (p * (p - 2)) * std::exp(-u * c.log_primes[i]));
    }
    s.add(om2_prime_tail(kGridQ, c.theta_Q));
    s.add(100 * kc.target_tol);  // kernel error budget for the prime zeta term
    return u * s.value();
}

double p_rough_lhs(u32 p, u64 m)
{
    const PrimeContext& c = grid_context();
    const double lm = std::log(double(m)), lp = std::log(double(p));
    CompensatedSum s;
    for (const PrimePower& q : c.prime_powers) {
        if (q.p < p) continue;
        const double L = lm + std::log(double(q.q));
        s.add(q.log_p / (double(q.q) * L * (L + lp)));
    }
    return s.value() + lambda_tail_upper_shifted_log(lm, lp, kGridQ, c.psi_Q);
}

bool is_rough(u64 m, u32 p)
{
    for (u64 d = 2; d < p && d <= m; ++d)
        if (m % d == 0) return false;
    return true;
}

std::string hex(double x)
{
    std::ostringstream os;
    os << std::hexfloat << x;
    return os.str();
}

double parse_double(const std::string& s)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw domain_error("bad floating-point token '" + s + "'");
    return v;
}

Verdict combine(const std::vector<CertLeaf>& leaves)
{
    bool inconclusive = leaves.empty();
    for (const CertLeaf& l : leaves) {
        if (l.verdict == Verdict::failed) return Verdict::failed;
        if (l.verdict == Verdict::inconclusive) inconclusive = true;
    }
    return inconclusive ? Verdict::inconclusive : Verdict::proved;
}

Interval analytic_range()
{
    const Interval end = Interval(1.0) / log(Interval(3.0));
    return {0.0, end.hi};
}

}  // namespace

Interval enclose_constant_C(u64 P_cut)
{
    if (P_cut < 11) throw domain_error("P_cut must be >= 11");
    Interval sum(0.0), theta(0.0);
    for (u32 p : primes_up_to(P_cut)) {
        const Interval lp = log(Interval(double(p)));
        theta += lp;
        if (p > 7) sum += lp / (Interval(double(p - 1)) * Interval(double(p - 2)));
    }
    const Interval P{double(P_cut)};
    const Interval g = Interval(1.0) / ((P - Interval(1.0)) * (P - Interval(2.0)));
    const Interval integral = log(P - Interval(1.0)) - log(P - Interval(2.0));
    const Interval base = P * g + integral;  // int_P^inf t (-g'(t)) dt
    const double upper = (Interval(kThetaRatioUpper) * base - theta * g).hi;
    double lower = 0.0;
    if (P_cut >= kThetaLowerFrom) {
        const Interval c_lo = Interval(1.0) - Interval(1.0) / log(P);
        lower = std::max(0.0, (c_lo * base - theta * g).lo);
    }
    return {(sum + Interval(lower)).lo, (sum + Interval(upper)).hi};
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::proved: return "proved";
    case Verdict::failed: return "failed";
    default: return "inconclusive";
    }
}

Verdict parse_verdict(const std::string& s)
{
    if (s == "proved") return Verdict::proved;
    if (s == "failed") return Verdict::failed;
    if (s == "inconclusive") return Verdict::inconclusive;
    throw domain_error("unknown verdict '" + s + "'");
}

CertLeaf evaluate_leaf(const Interval& u, const Interval& C, double rhs_scale)
{
    CertLeaf leaf;
    leaf.u = u;
    leaf.lhs = analytic_lhs(u, C);
    leaf.rhs = analytic_rhs(u) * Interval(rhs_scale);
    if (leaf.lhs.hi < leaf.rhs.lo)
        leaf.verdict = Verdict::proved;
    else if (leaf.lhs.lo > leaf.rhs.hi)
        leaf.verdict = Verdict::failed;
    else
        leaf.verdict = Verdict::inconclusive;
    return leaf;
}

Certificate certify_analytic(int max_depth, const CertifyOptions& opt)
{
    if (max_depth < 1 || max_depth > 60) throw domain_error("max_depth must lie in [1, 60]");
    if (!(opt.rhs_scale > 0)) throw domain_error("rhs_scale must be positive");
    Certificate cert;
    cert.param_range = analytic_range();
    cert.C = enclose_constant_C(opt.P_cut);
    cert.rhs_scale = opt.rhs_scale;
    cert.max_depth = max_depth;
    // depth-first in subinterval order keeps the leaf list sorted
    std::function<void(const Interval&, int)> visit = [&](const Interval& u, int depth) {
        CertLeaf leaf = evaluate_leaf(u, cert.C, cert.rhs_scale);
        const double mid = u.mid();
        if (leaf.verdict == Verdict::inconclusive && depth < max_depth && u.lo < mid && mid < u.hi) {
            visit(Interval(u.lo, mid), depth + 1);
            visit(Interval(mid, u.hi), depth + 1);
            return;
        }
        cert.leaves.push_back(leaf);
    };
    visit(cert.param_range, 1);
    cert.verdict = combine(cert.leaves);
    return cert;
}

bool replay(const Certificate& cert)
{
    if (cert.leaves.empty()) return false;
    // the stored C must be at least as wide as an independent enclosure of the true constant
    if (!cert.C.contains(enclose_constant_C(kReplayPCut))) return false;
    if (cert.leaves.front().u.lo != cert.param_range.lo || cert.leaves.back().u.hi != cert.param_range.hi) return false;
    for (std::size_t i = 0; i < cert.leaves.size(); ++i) {
        const CertLeaf& l = cert.leaves[i];
        if (i + 1 < cert.leaves.size() && l.u.hi != cert.leaves[i + 1].u.lo) return false;
        const CertLeaf r = evaluate_leaf(l.u, cert.C, cert.rhs_scale);
        if (r.verdict != l.verdict || r.lhs.lo != l.lhs.lo || r.lhs.hi != l.lhs.hi || r.rhs.lo != l.rhs.lo ||
            r.rhs.hi != l.rhs.hi)
            return false;
        if (l.verdict == Verdict::proved && !(l.lhs.hi < l.rhs.lo)) return false;
    }
    return combine(cert.leaves) == cert.verdict;
}

void write_certificate(std::ostream& os, const Certificate& cert)
{
    os << "certificate " << cert.inequality_id << '\n'
       << "range " << hex(cert.param_range.lo) << ' ' << hex(cert.param_range.hi) << '\n'
       << "C " << hex(cert.C.lo) << ' ' << hex(cert.C.hi) << '\n'
       << "rhs_scale " << hex(cert.rhs_scale) << '\n'
       << "max_depth " << cert.max_depth << '\n'
       << "verdict " << to_string(cert.verdict) << '\n'
       << "leaves " << cert.leaves.size() << '\n';
    for (const CertLeaf& l : cert.leaves)
        os << "leaf " << hex(l.u.lo) << ' ' << hex(l.u.hi) << ' ' << hex(l.lhs.lo) << ' ' << hex(l.lhs.hi) << ' '
           << hex(l.rhs.lo) << ' ' << hex(l.rhs.hi) << ' ' << to_string(l.verdict) << '\n';
}

Certificate read_certificate(std::istream& is)
{
    Certificate cert;
    auto expect = [&](const std::string& key) {
        std::string k;
        if (!(is >> k) || k != key) throw domain_error("certificate: expected '" + key + "'");
    };
    auto num = [&] {
        std::string s;
        if (!(is >> s)) throw domain_error("certificate: truncated record");
        return parse_double(s);
    };
    std::string word;
    expect("certificate");
    is >> cert.inequality_id;
    expect("range");
    {
        double a = num(), b = num();
        cert.param_range = Interval(a, b);
    }
    expect("C");
    {
        double a = num(), b = num();
        cert.C = Interval(a, b);
    }
    expect("rhs_scale");
    cert.rhs_scale = num();
    expect("max_depth");
    is >> cert.max_depth;
    expect("verdict");
    is >> word;
    cert.verdict = parse_verdict(word);
    expect("leaves");
    std::size_t n = 0;
    is >> n;
    for (std::size_t i = 0; i < n; ++i) {
        expect("leaf");
        CertLeaf l;
        double a = num(), b = num();
        l.u = Interval(a, b);
        a = num(), b = num();
        l.lhs = Interval(a, b);
        a = num(), b = num();
        l.rhs = Interval(a, b);
        is >> word;
        l.verdict = parse_verdict(word);
        cert.leaves.push_back(l);
    }
    if (!is) throw domain_error("certificate: malformed input");
    return cert;
}

GridSpec parse_grid(const std::string& text)
{
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
        throw domain_error("grid must look like lo:hi:points");
    GridSpec g;
    g.lo = parse_double(a);
    g.hi = parse_double(b);
    char* end = nullptr;
    const long n = std::strtol(c.c_str(), &end, 10);
    if (*end != '\0' || n < 2 || n > 10000000) throw domain_error("grid point count must be an integer >= 2");
    g.points = static_cast<int>(n);
    if (!(g.lo < g.hi)) throw domain_error("grid needs lo < hi");
    return g;
}

std::vector<std::string> grid_ids() { return {"phi_ineq", "eta_monotone", "sharp", "sharp2", "om2", "analytic", "p_rough"}; }

GridSpec default_grid(const std::string& id)
{
    if (id == "phi_ineq") return {0.001, 5.0, 500};
    if (id == "eta_monotone") return {0.05, 10.0, 500};
    if (id == "sharp" || id == "sharp2") return {0.01, 5.0, 200};
    if (id == "om2") return {0.001, 5.0, 300};
    if (id == "analytic") return {0.001, 1.0 / std::log(3.0), 500};
    if (id == "p_rough") return {1.0, 1000.0, 1000};
    throw domain_error("unknown inequality id '" + id + "'");
}

GridReport grid_check(const std::string& id, const GridSpec& grid, const KernelConfig& kc)
{
    kc.validate();
    GridReport r;
    r.id = id;
    const double l2 = std::log(2.0);
    if (id == "phi_ineq") {
        r.columns = {"u", "bound_2u", "bound_1u", "neg_zeta_ratio"};
        for (double u : grid_points(grid)) {
            if (!(u > 0)) throw domain_error("phi_ineq needs u > 0");
            const double nz = neg_zeta_log_deriv(1 + u, kc), b2 = l2 / std::expm1(u * l2), b1 = 1 / u;
            r.rows.push_back({u, b2, b1, nz});
            check(r, nz, b2);
            check(r, b2, b1);
        }
    } else if (id == "eta_monotone") {
        r.columns = {"s", "eta", "eta_next_minus_eta"};
        const std::vector<double> xs = grid_points(grid);
        if (!(xs.front() > 0)) throw domain_error("eta_monotone needs s > 0");
        std::vector<double> ev;
        for (double s : xs) ev.push_back(eta(s, kc));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double d = i + 1 < xs.size() ? ev[i + 1] - ev[i] : 0.0;
            r.rows.push_back({xs[i], ev[i], d});
            if (i + 1 < xs.size()) check(r, ev[i], ev[i + 1]);
        }
    } else if (id == "sharp") {
        r.columns = {"x", "lhs", "sum_j", "x_over_x_plus_half", "one"};
        for (double x : grid_points(grid)) {
            if (!(x > 0)) throw domain_error("sharp needs x > 0");
            const double lhs = sharp_lhs(x), sj = x * boost::math::trigamma(x + 1), h = x / (x + 0.5);
            r.rows.push_back({x, lhs, sj, h, 1.0});
            check(r, lhs, sj);
            check(r, sj, h);
            check(r, h, 1.0);
        }
    } else if (id == "sharp2") {
        r.columns = {"x", "lhs", "rhs"};
        for (double x : grid_points(grid)) {
            if (!(x >= 0)) throw domain_error("sharp2 needs x >= 0");
            const double lhs = sharp2_lhs(x), rhs = 1 / ((x + 1) * l2);
            r.rows.push_back({x, lhs, rhs});
            check(r, lhs, rhs);
        }
    } else if (id == "om2") {
        r.columns = {"u", "lhs", "rhs"};
        for (double u : grid_points(grid)) {
            if (!(u > 0)) throw domain_error("om2 needs u > 0");
            const double lhs = om2_lhs(u, kc);
            r.rows.push_back({u, lhs, 1.0});
            check(r, lhs, 1.0);
        }
    } else if (id == "analytic") {
        r.columns = {"u", "lhs", "rhs"};
        const double C = enclose_constant_C(kGridQ).hi;
        for (double u : grid_points(grid)) {
            if (!(u >= 0)) throw domain_error("analytic needs u >= 0");
            const double lhs = analytic_lhs<double>(u, C), rhs = analytic_rhs<double>(u);
            r.rows.push_back({u, lhs, rhs});
            check(r, lhs, rhs);
        }
    } else if (id == "p_rough") {
        // grid.hi is the largest m; the point count is not used
        r.columns = {"p", "m", "lhs", "rhs"};
        const u64 m_max = static_cast<u64>(grid.hi);
        if (m_max < 1 || m_max > 1000000) throw domain_error("p_rough needs 1 <= m_max <= 10^6");
        for (u32 p : {3u, 5u, 7u})
            for (u64 m = 1; m <= m_max; ++m) {
                if (!is_rough(m, p)) continue;
                const double lhs = p_rough_lhs(p, m), rhs = 1 / std::log(double(p) * double(m));
                r.rows.push_back({double(p), double(m), lhs, rhs});
                check(r, lhs, rhs);
            }
    } else {
        throw domain_error("unknown inequality id '" + id + "'");
    }
    return r;
}

std::vector<std::string> figure_names() { return {"phi", "eta", "mangoldt", "mangoldt2", "primesum2", "primesum3"}; }

std::string figure_inequality(const std::string& figure)
{
    if (figure == "phi") return "phi_ineq";
    if (figure == "eta") return "eta_monotone";
    if (figure == "mangoldt") return "sharp";
    if (figure == "mangoldt2") return "sharp2";
    if (figure == "primesum2") return "om2";
    if (figure == "primesum3") return "analytic";
    throw domain_error("unknown figure '" + figure + "'");
}

}  // namespace divchain
