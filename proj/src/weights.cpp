#include "divchain/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "divchain/error.hpp"
#include "divchain/quadrature.hpp"

namespace divchain {

void WeightId::validate() const
{
    if (kind == WeightKind::nu_shifted) {
        if (shift_prime < 2) throw domain_error("shifted weight needs a prime");
        for (u32 d = 2; d * d <= shift_prime; ++d)
            if (shift_prime % d == 0) throw domain_error("shift must be prime");
    }
    if (kind == WeightKind::nu_lambda && !(quad_tol > 0 && quad_tol <= 1e-4))
        throw domain_error("quad_tol must lie in (0, 1e-4]");
}

std::string WeightId::name() const
{
    switch (kind) {
    case WeightKind::nu0: return "nu0";
    case WeightKind::nu_mertens: return "nu_mertens";
    case WeightKind::nu_lambda: return "nu_lambda";
    case WeightKind::nu_shifted: return "nu_shifted" + std::to_string(shift_prime);
    }
    return "?";
}

WeightId parse_weight(const std::string& text)
{
    if (text == "nu0") return WeightId::nu0();
    if (text == "nu_mertens" || text == "mertens") return WeightId::mertens();
    if (text == "nu_lambda" || text == "lambda") return WeightId::lambda();
    for (const char* prefix : {"nu_shifted", "nu"}) {
        std::string pre(prefix);
        if (text.rfind(pre, 0) == 0 && text.size() > pre.size()) {
            std::string rest = text.substr(pre.size());
            if (rest.find_first_not_of("0123456789") == std::string::npos) {
                WeightId w = WeightId::shifted(static_cast<u32>(std::stoul(rest)));
                w.validate();
                return w;
            }
        }
    }
    throw domain_error("unknown weight '" + text + "'");
}

double nu0(u64 n)
{
    if (n < 2) throw domain_error("nu0 is defined for n >= 2");
    double x = double(n);
    return 1.0 / (x * std::log(x));
}

double nu_shifted(u64 n, u32 p)
{
    if (n < 1) throw domain_error("nu_p is defined for n >= 1");
    double x = double(n);
    return 1.0 / (x * (std::log(double(p)) + std::log(x)));
}

double nu_mertens(u64 n, const FactorTable& t)
{
    if (n < 1) throw domain_error("Mertens weight is defined for n >= 1");
    if (n == 1) return std::exp(kEulerGamma);
    u64 P = factorize(n, t).largest_prime();
    return std::exp(kEulerGamma) / double(n) * t.euler_prefix(t.prime_index(static_cast<u32>(P)));
}

QuadEstimate nu_lambda_quadrature(u64 n, double tol, const KernelConfig& cfg)
{
    if (!(tol > 0 && tol <= 1e-4)) throw domain_error("nu_lambda tolerance must lie in (0, 1e-4]");
    if (n < 2) throw domain_error("nu_lambda quadrature needs n >= 2");
    const double x = double(n), L = std::log(x);
    // budget in J = n * nu: half goes to quadrature and a quarter to the cutoff, leaving the rest for kernels
    const double budgetJ = tol * x;
    KernelConfig k = cfg;
    k.target_tol = std::clamp(0.1 * budgetJ, 1e-15, cfg.target_tol);
    // The nominal cutoff is u = U; integrating only to T <= U log n and bounding the rest
    // by int_T^inf e^{-t} dt = e^{-T} is equally rigorous since 1/zeta <= 1.
    const double U = std::max(30.0 / L, 30.0);
    const double T = std::min(U * L, std::log(8.0 / budgetJ));
    auto f = [&](double t) { return std::exp(-t) / zeta(1.0 + t / L, k); };
    // e^{-t} sets the scale; geometric breakpoints keep the panel count small
    std::vector<double> breaks{0.0};
    for (double b = 0.5; b < T; b *= 2) breaks.push_back(b);
    breaks.push_back(T);
    QuadResult q = integrate(f, breaks, 0.5 * budgetJ);
    QuadEstimate out;
    out.value = q.value / x;
    // |1/zeta error| <= kernel tol; integrate against e^{-t}
    out.error_bound = (q.error + std::exp(-T) + k.target_tol) / x;
    return out;
}

double evaluate(const WeightId& w, u64 n, const FactorTable& t, const KernelConfig& cfg)
{
    w.validate();
    if (n == 0) throw domain_error("weights are defined on positive integers");
    switch (w.kind) {
    case WeightKind::nu0: return nu0(n);
    case WeightKind::nu_shifted: return nu_shifted(n, w.shift_prime);
    case WeightKind::nu_mertens:
        if (n > t.limit()) throw domain_error("Mertens weight needs n within the sieve");
        return nu_mertens(n, t);
    case WeightKind::nu_lambda: return n == 1 ? 1.0 : nu_lambda_quadrature(n, w.quad_tol, cfg).value;
    }
    return 0;
}

Weight::Weight(WeightId id, const FactorTable& t, const KernelConfig& cfg, u64 cache_limit)
    : id_(id), t_(&t), cfg_(cfg)
{
    id_.validate();
    if (cache_limit > 0) {
        if (id_.kind == WeightKind::nu_mertens && cache_limit > t.limit())
            throw domain_error("Mertens cache exceeds the sieve");
        cache_.resize(static_cast<Eigen::Index>(cache_limit + 1));
        cache_[0] = 0;
        for (u64 n = 1; n <= cache_limit; ++n) {
            if (n == 1 && id_.kind == WeightKind::nu0)
                cache_[1] = std::numeric_limits<double>::quiet_NaN();
            else
                cache_[static_cast<Eigen::Index>(n)] = compute(n);
        }
    }
}

double Weight::operator()(u64 n) const
{
    if (n < static_cast<u64>(cache_.size()) && n >= 1) {
        double v = cache_[static_cast<Eigen::Index>(n)];
        if (std::isnan(v)) throw domain_error("nu0 is defined for n >= 2");
        return v;
    }
    return compute(n);
}

double Weight::compute(u64 n) const
{
    // nu_lambda is held to 1e-10 relative as well, so ratios nu(nq)/nu(n) stay accurate
    if (id_.kind == WeightKind::nu_lambda && n >= 2)
        return nu_lambda_quadrature(n, std::min(id_.quad_tol, 1e-10 * nu0(n)), cfg_).value;
    return evaluate(id_, n, *t_, cfg_);
}

double Weight::at_product(u64 m, u64 q, u32 p) const
{
    if (id_.kind != WeightKind::nu_mertens) return (*this)(m * q);
    // P(mq) = max(P(m), p); only the prime index is needed
    u64 Pm = m == 1 ? 1 : factorize(m, *t_).largest_prime();
    u32 P = static_cast<u32>(std::max<u64>(Pm, p));
    return std::exp(kEulerGamma) / (double(m) * double(q)) * t_->euler_prefix(t_->prime_index(P));
}

double Weight::value_error() const
{
    return id_.kind == WeightKind::nu_lambda ? id_.quad_tol : 0.0;
}

}  // namespace divchain
