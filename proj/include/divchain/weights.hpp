#pragma once

#include <string>

#include <Eigen/Core>

#include "divchain/arith.hpp"
#include "divchain/kernels.hpp"

namespace divchain {

enum class WeightKind { nu0, nu_mertens, nu_lambda, nu_shifted };

struct WeightId {
    WeightKind kind = WeightKind::nu0;
    u32 shift_prime = 0;     // nu_shifted only
    double quad_tol = 1e-12; // nu_lambda only

    static WeightId nu0() { return {WeightKind::nu0, 0, 1e-12}; }
    static WeightId mertens() { return {WeightKind::nu_mertens, 0, 1e-12}; }
    static WeightId lambda(double tol = 1e-12) { return {WeightKind::nu_lambda, 0, tol}; }
    static WeightId shifted(u32 p) { return {WeightKind::nu_shifted, p, 1e-12}; }

    void validate() const;
    std::string name() const;
};

WeightId parse_weight(const std::string& text);

struct QuadEstimate {
    double value = 0;
    double error_bound = 0;
};

// nu_Lambda(n) = int_0^inf log n * n^{-1-u} / zeta(1+u) du, n >= 2.
// Integrated in t = u log n as (1/n) int_0^T e^{-t} / zeta(1 + t/log n) dt;
// the cut at T contributes at most e^{-T}/n = n^{-1-U}, which is added to error_bound.
QuadEstimate nu_lambda_quadrature(u64 n, double tol, const KernelConfig& cfg = {});

double nu0(u64 n);
double nu_shifted(u64 n, u32 p);
double nu_mertens(u64 n, const FactorTable& t);

double evaluate(const WeightId& w, u64 n, const FactorTable& t, const KernelConfig& cfg = {});

// Weight evaluator with an optional dense cache on [0, cache_limit]. Values beyond
// the cache fall back to closed forms or quadrature.
class Weight {
public:
    Weight(WeightId id, const FactorTable& t, const KernelConfig& cfg = {}, u64 cache_limit = 0);

    const WeightId& id() const { return id_; }
    const FactorTable& table() const { return *t_; }
    const KernelConfig& kernels() const { return cfg_; }

    double operator()(u64 n) const;

    // Weight of m*q where q = p^k is a prime power; m <= table limit but m*q may exceed it.
    double at_product(u64 m, u64 q, u32 p) const;

    // Largest |error| of any value returned (quadrature budget for nu_lambda, 0 otherwise).
    double value_error() const;

private:
    double compute(u64 n) const;

    WeightId id_;
    const FactorTable* t_;
    KernelConfig cfg_;
    Eigen::ArrayXd cache_;
};

}  // namespace divchain
