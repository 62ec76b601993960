#include "divchain/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "divchain/error.hpp"

namespace divchain {

namespace {

// B_{2k} / (2k)! for k = 1..15
constexpr std::array<double, 15> kBernoulliOverFact = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0,
    657931.0 / 186134520519971831808000000.0,
    -3392780147.0 / 37893265687455865519472640000000.0,
    1723168255201.0 / 759790291646040068357842010112000000.0,
};

struct ZetaPair {
    double z, dz, bound;
};

// Euler-Maclaurin for zeta(s) and zeta'(s) with N summed terms and M correction terms.
ZetaPair euler_maclaurin(double s, int N, int M)
{
    double z = 0, dz = 0;
    for (int n = N - 1; n >= 1; --n) {
        double t = std::pow(double(n), -s);
        z += t;
        dz -= std::log(double(n)) * t;
    }
    const double lN = std::log(double(N));
    const double N1s = std::pow(double(N), 1.0 - s);
    const double Ns = N1s / N;
    z += N1s / (s - 1.0) + 0.5 * Ns;
    dz += -N1s * lN / (s - 1.0) - N1s / ((s - 1.0) * (s - 1.0)) - 0.5 * lN * Ns;

    double rising = s;          // (s)_{2k-1}
    double rsum = 1.0 / s;      // sum_{j<2k-1} 1/(s+j)
    double Npow = Ns / N;       // N^{-s-2k+1}
    double last = 0;
    for (int k = 1; k <= M + 1; ++k) {
        if (k > 1) {
            rising *= (s + 2 * k - 3) * (s + 2 * k - 2);
            rsum += 1.0 / (s + 2 * k - 3) + 1.0 / (s + 2 * k - 2);
            Npow /= double(N) * N;
        }
        double term = kBernoulliOverFact[k - 1] * rising * Npow;
        if (k == M + 1) {
            last = std::abs(term) + std::abs(term * (rsum - lN));
            break;
        }
        z += term;
        dz += term * (rsum - lN);
    }
    return {z, dz, 2.0 * last};
}

ZetaPair euler_maclaurin_to_tol(double s, const KernelConfig& cfg, double tol)
{
    const int M = std::min(cfg.euler_maclaurin_terms, 14);
    int N = std::max(cfg.series_cutoff, 2);
    for (;;) {
        ZetaPair r = euler_maclaurin(s, N, M);
        if (r.bound <= tol || N > (1 << 16)) return r;
        N *= 2;
    }
}

const std::array<double, 32> kLogInt = [] {
    std::array<double, 32> a{};
    for (int i = 1; i < 32; ++i) a[i] = std::log(double(i));
    return a;
}();

int mobius_small(int m)
{
    int r = 1;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        m /= p;
        if (m % p == 0) return 0;
        r = -r;
    }
    return m > 1 ? -r : r;
}

}  // namespace

void KernelConfig::validate() const
{
    if (!(target_tol > 0 && target_tol <= 1e-3)) throw domain_error("target_tol must lie in (0, 1e-3]");
    if (euler_maclaurin_terms < 1 || series_cutoff < 10) throw domain_error("kernel cutoffs out of range");
}

double eta(double s, const KernelConfig& cfg)
{
    cfg.validate();
    if (!(s > 0)) throw domain_error("eta requires s > 0");
    // (k+1)^{-s} is a moment sequence, so the CVZ error is at most 2 / (3 + sqrt 8)^n.
    // Budget relative to the zeta conversion factor so zeta(s) keeps target_tol near s = 1.
    const double scale = s > 1 ? std::min(1.0, -std::expm1((1.0 - s) * M_LN2)) : 1.0;
    const double tol = std::max(0.25 * cfg.target_tol * scale, 1e-18);
    int n = static_cast<int>(std::ceil(std::log(2.0 / tol) / std::log(3.0 + std::sqrt(8.0))));
    n = std::clamp(n, 8, 26);
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0, c = -d, sum = 0.0;
    for (int k = 0; k < n; ++k) {
        c = b - c;
        sum += c * std::exp(-s * kLogInt[k + 1]);
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
    }
    return sum / d;
}

double zeta(double s, const KernelConfig& cfg)
{
    cfg.validate();
    if (!(s > 1)) throw domain_error("zeta requires s > 1");
    if (s <= 3.0) return eta(s, cfg) / -std::expm1((1.0 - s) * M_LN2);
    return euler_maclaurin_to_tol(s, cfg, 0.25 * cfg.target_tol).z;
}

double neg_zeta_log_deriv(double s, const KernelConfig& cfg)
{
    cfg.validate();
    if (!(s > 1)) throw domain_error("-zeta'/zeta requires s > 1");
    // the ratio inherits the relative errors of both factors; aim well below tol
    ZetaPair r = euler_maclaurin_to_tol(s, cfg, 1e-3 * cfg.target_tol);
    return -r.dz / r.z;
}

double prime_log_sum(double s, const KernelConfig& cfg)
{
    if (!(s > 1)) throw domain_error("prime log sum requires s > 1");
    double total = 0;
    for (int m = 1; m * s <= 70.0 || m == 1; ++m) {
        int mu = mobius_small(m);
        if (mu) total += mu * neg_zeta_log_deriv(m * s, cfg);
    }
    return total;
}

double psi_ratio_bound(double Q)
{
    if (!(Q >= 2)) throw domain_error("Chebyshev cutoff must be >= 2");
    // theta(x) < x (1 + 1/(2 log x)) and theta(x) < 1.01624 x, plus psi - theta < 1.42620 sqrt(x)
    const double gap = 1.42620 / std::sqrt(Q);
    return std::min({kPsiRatioGlobal, 1.0 + 0.5 / std::log(Q) + gap, 1.01624 + gap});
}

double lambda_tail_upper_log(double log_m, std::uint64_t Q, double psi_Q)
{
    if (!(log_m >= 0) || Q < 2) throw domain_error("lambda_tail_upper needs m >= 1 and Q >= 2");
    const double c = psi_ratio_bound(double(Q));
    const double L = log_m + std::log(double(Q));
    const double excess = std::max(0.0, c * double(Q) - psi_Q);
    return c / L + excess / (double(Q) * L * L);
}

double lambda_tail_upper_shifted_log(double log_m, double log_h, std::uint64_t Q, double psi_Q)
{
    if (!(log_m >= 0) || !(log_h > 0) || Q < 2)
        throw domain_error("shifted tail needs m >= 1, h > 1 and Q >= 2");
    const double c = psi_ratio_bound(double(Q));
    const double L = log_m + std::log(double(Q));
    const double excess = std::max(0.0, c * double(Q) - psi_Q);
    // integral of dt / (t log(mt) log(hmt)) over t > Q is log(1 + a/L)/a with a = log h
    return c * std::log1p(log_h / L) / log_h + excess / (double(Q) * L * (L + log_h));
}

double lambda_tail_upper(std::uint64_t m, std::uint64_t Q, double psi_Q)
{
    if (m < 1) throw domain_error("lambda_tail_upper needs m >= 1 and Q >= 2");
    return lambda_tail_upper_log(std::log(double(m)), Q, psi_Q);
}

double lambda_dirichlet_tail_upper(double s, std::uint64_t Q, double psi_Q)
{
    if (!(s > 1) || Q < 2) throw domain_error("lambda_dirichlet_tail_upper needs s > 1 and Q >= 2");
    const double c = psi_ratio_bound(double(Q));
    const double lq = std::log(double(Q));
    return std::max(0.0, c * std::exp((1.0 - s) * lq) * s / (s - 1.0) - psi_Q * std::exp(-s * lq));
}

}  // namespace divchain
