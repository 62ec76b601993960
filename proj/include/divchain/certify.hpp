#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "divchain/arith.hpp"
#include "divchain/interval.hpp"
#include "divchain/kernels.hpp"

namespace divchain {

// Enclosure of C = sum_{p > 7} log p / ((p-1)(p-2)): interval sum over 7 < p <= P_cut plus
// a tail bracketed by partial summation against theta(t).
Interval enclose_constant_C(u64 P_cut);

// Both sides of the prime inequality certified on (0, 1/log 3]:
//   sum_{p in {3,5,7}} log p (2p^u - 1) / ((p-2) p^u (p^{1+u} - 1)) + C
//     <= (2^{3u/4}/2 + 2^{u/2}) log 2 / (2^{1+u} - 1).
template <class T>
T analytic_lhs(const T& u, const T& C)
{
    using std::exp;
    using std::log;
    T sum = C;
    for (int p : {3, 5, 7}) {
        const T lp = log(T(double(p)));
        const T pu = exp(u * lp);
        const T p1u = exp((u + T(1.0)) * lp);
        sum = sum + lp * (T(2.0) * pu - T(1.0)) / (T(double(p - 2)) * pu * (p1u - T(1.0)));
    }
    return sum;
}

template <class T>
T analytic_rhs(const T& u)
{
    using std::exp;
    using std::log;
    const T l2 = log(T(2.0));
    const T num = T(0.5) * exp(T(0.75) * u * l2) + exp(T(0.5) * u * l2);
    return num * l2 / (exp((u + T(1.0)) * l2) - T(1.0));
}

enum class Verdict { proved, failed, inconclusive };

std::string to_string(Verdict v);
Verdict parse_verdict(const std::string& s);

struct CertLeaf {
    Interval u;
    Interval lhs;
    Interval rhs;
    Verdict verdict = Verdict::inconclusive;
};

struct Certificate {
    std::string inequality_id = "analytic";
    Interval param_range;
    Interval C;               // enclosure used on the left side
    double rhs_scale = 1.0;   // 1 for the genuine inequality; other values are mutation tests
    int max_depth = 0;
    std::vector<CertLeaf> leaves;
    Verdict verdict = Verdict::inconclusive;
};

struct CertifyOptions {
    u64 P_cut = 1000000;
    double rhs_scale = 1.0;
};

// Adaptive bisection of [0, 1/log 3]. The root has depth 1 and a leaf is split while its depth
// is below max_depth, so max_depth = 1 evaluates the whole range as one leaf.
Certificate certify_analytic(int max_depth, const CertifyOptions& opt = {});

// Leaf enclosures for one parameter interval.
CertLeaf evaluate_leaf(const Interval& u, const Interval& C, double rhs_scale);

// Re-evaluates every stored leaf and checks verdicts, coverage and the overall verdict. The stored
// C must contain the enclosure for P_cut = 10^6.
bool replay(const Certificate& cert);

// One record per leaf, endpoints as hexadecimal floats.
void write_certificate(std::ostream& os, const Certificate& cert);
Certificate read_certificate(std::istream& is);

struct GridSpec {
    double lo = 0;
    double hi = 1;
    int points = 100;
};

// "lo:hi:points"
GridSpec parse_grid(const std::string& text);

struct GridReport {
    std::string id;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    double max_violation = -std::numeric_limits<double>::infinity();  // largest lhs - rhs over all checks
    std::size_t violations = 0;                                         // checks with lhs - rhs > tolerance
    double tolerance = 1e-9;
};

// Inequality ids: phi_ineq, eta_monotone, sharp, sharp2, om2, analytic, p_rough.
std::vector<std::string> grid_ids();
GridSpec default_grid(const std::string& id);
GridReport grid_check(const std::string& id, const GridSpec& grid, const KernelConfig& kc = {});

// Figure names phi, eta, mangoldt, mangoldt2, primesum2, primesum3 mapped to inequality ids.
std::string figure_inequality(const std::string& figure);
std::vector<std::string> figure_names();

}  // namespace divchain
