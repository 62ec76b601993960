#pragma once

#include <cstdint>

namespace divchain {

struct KernelConfig {
    double target_tol = 1e-9;
    int euler_maclaurin_terms = 12;
    int series_cutoff = 20;

    void validate() const;
};

// Riemann zeta for real s > 1. Uses eta(s) / (1 - 2^{1-s}) for s <= 3 and
// Euler-Maclaurin above. Near s = 1 the error is target_tol relative to zeta(s).
double zeta(double s, const KernelConfig& cfg = {});

// Dirichlet eta for real s > 0 by Cohen-Rodriguez Villegas-Zagier acceleration.
double eta(double s, const KernelConfig& cfg = {});

// -zeta'(s)/zeta(s) = sum Lambda(n) n^{-s} for s > 1.
double neg_zeta_log_deriv(double s, const KernelConfig& cfg = {});

// sum over primes p of log p * p^{-s}, s > 1, by Mobius inversion of -zeta'/zeta.
double prime_log_sum(double s, const KernelConfig& cfg = {});

// Explicit Chebyshev bound: psi(t) <= c * t for all t >= Q, with
// c = min(1.03883, 1 + 1/(2 log Q) + g, 1.01624 + g) with g = 1.42620/sqrt Q (Rosser-Schoenfeld).
double psi_ratio_bound(double Q);

// Upper bound for sum_{q > Q} Lambda(q) / (q log^2(m q)), m >= 1, Q >= 2.
// Partial summation against psi(t) <= c t gives
//   c / log(mQ) + (c Q - psi(Q)) / (Q log^2(mQ)).
// psi_Q = 0 is always valid; passing the true psi(Q) tightens the bound.
double lambda_tail_upper(std::uint64_t m, std::uint64_t Q, double psi_Q = 0.0);

// Same bound for real m >= 1 given through log m.
double lambda_tail_upper_log(double log_m, std::uint64_t Q, double psi_Q = 0.0);

// Upper bound for sum_{q > Q} Lambda(q) / (q log(m q) log(h m q)) with h > 1.
double lambda_tail_upper_shifted_log(double log_m, double log_h, std::uint64_t Q, double psi_Q = 0.0);

// Upper bound for sum_{q > Q} Lambda(q) q^{-s}, s > 1:  c Q^{1-s} s/(s-1) - psi(Q) Q^{-s}.
double lambda_dirichlet_tail_upper(double s, std::uint64_t Q, double psi_Q = 0.0);

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kPsiRatioGlobal = 1.03883;

}  // namespace divchain
