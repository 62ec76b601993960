#include <doctest.h>

#include <cmath>
#include <map>

#include "divchain/chains.hpp"
#include "divchain/error.hpp"
#include "divchain/weights.hpp"
#include "support.hpp"

using namespace divchain;

namespace {

std::map<u64, double> as_map(const TransitionList& l)
{
    std::map<u64, double> m;
    for (const Transition& tr : l.entries) m[tr.target] += tr.prob;
    return m;
}

std::vector<ChainId> all_chains()
{
    return {ChainId::random_prime(), ChainId::mertens(), ChainId::von_mangoldt(), ChainId::eps_modified(),
            ChainId::odd_banks_martin(2, {3, 5, 7, 11})};
}

}  // namespace

TEST_CASE("closed-form weights")
{
    CHECK(nu0(10) == doctest::Approx(1 / (10 * std::log(10.0))));
    CHECK_THROWS_AS(nu0(1), domain_error);
    CHECK(nu_shifted(1, 2) == doctest::Approx(1 / std::log(2.0)));
    CHECK(nu_shifted(5, 2) == doctest::Approx(1 / (5 * std::log(10.0))));
    CHECK(parse_weight("nu0").kind == WeightKind::nu0);
    CHECK(parse_weight("nu2").shift_prime == 2);
    CHECK(parse_weight("lambda").kind == WeightKind::nu_lambda);
    CHECK_THROWS_AS(parse_weight("nu4"), domain_error);
    CHECK_THROWS_AS(parse_weight("bogus"), domain_error);
}

TEST_CASE("nu_Lambda quadrature against reference values")
{
    // int_1^inf log n n^{-s} / zeta(s) ds, 30-digit mpmath
    QuadEstimate a = nu_lambda_quadrature(12, 1e-13);
    CHECK(std::abs(a.value - 0.0232509865616362845) <= a.error_bound + 1e-14);
    CHECK(a.error_bound < 1e-12);
    QuadEstimate b = nu_lambda_quadrature(2, 1e-13);
    CHECK(std::abs(b.value - 0.286293561399944812) <= b.error_bound + 1e-14);
    // nu_Lambda(n) ~ nu0(n)
    const double ratio = nu_lambda_quadrature(1000000, 1e-13).value / nu0(1000000);
    CHECK(std::abs(ratio - 1) < 0.1);
}

TEST_CASE("cached and uncached weights agree")
{
    const FactorTable& t = test::table();
    Weight cached(WeightId::lambda(1e-12), t, {}, 2000);
    Weight plain(WeightId::lambda(1e-12), t);
    for (u64 n : {2ull, 3ull, 97ull, 1999ull, 2000ull}) CHECK(cached(n) == doctest::Approx(plain(n)).epsilon(1e-12));
    Weight m(WeightId::mertens(), t, {}, 1000);
    CHECK(m(1) > 0);
    CHECK(m.at_product(10, 4, 2) == doctest::Approx(m(40)).epsilon(1e-14));
}

TEST_CASE("specific transition laws")
{
    const FactorTable& t = test::table();
    const double l12 = std::log(12.0);
    auto vm = as_map(transitions_down(ChainId::von_mangoldt(), 12, t));
    CHECK(vm.size() == 3);
    CHECK(vm[6] == doctest::Approx(std::log(2.0) / l12));
    CHECK(vm[3] == doctest::Approx(std::log(2.0) / l12));
    CHECK(vm[4] == doctest::Approx(std::log(3.0) / l12));

    auto eps = as_map(transitions_down(ChainId::eps_modified(), 8, t));
    CHECK(eps.size() == 2);
    CHECK(eps[4] == doctest::Approx(1.0 / 3));
    CHECK(eps[2] == doctest::Approx(2.0 / 3));
    CHECK(as_map(transitions_down(ChainId::eps_modified(), 7, t))[7] == 1.0);

    CHECK(as_map(transitions_down(ChainId::mertens(), 12, t))[4] == 1.0);
    auto rp = as_map(transitions_down(ChainId::random_prime(), 30, t));
    CHECK(rp.size() == 3);
    CHECK(rp[15] == doctest::Approx(1.0 / 3));

    ChainId obm = ChainId::odd_banks_martin(2, {3, 5, 7});
    const double lam = 2 * 3 * std::log(3.0) + (5.0 / 3) * std::log(5.0);
    auto o = as_map(transitions_down(obm, 45, t));
    CHECK(o[15] == doctest::Approx(2 * 3 * std::log(3.0) / lam));
    CHECK(o[9] == doctest::Approx((5.0 / 3) * std::log(5.0) / lam));
    CHECK(is_absorbing(obm, 15, t));
    CHECK_FALSE(in_state_space(obm, 22, t));
    CHECK_FALSE(in_state_space(obm, 11 * 3, t));
    CHECK_THROWS_AS(transitions_down(obm, 33, t), domain_error);
    CHECK_THROWS_AS(transitions_down(ChainId::eps_modified(), 1, t), domain_error);
}

TEST_CASE("chain identifiers are validated")
{
    CHECK_THROWS_AS(ChainId::odd_banks_martin(0, {3}), domain_error);
    CHECK_THROWS_AS(ChainId::odd_banks_martin(2, {}), domain_error);
    CHECK_THROWS_AS(ChainId::odd_banks_martin(2, {2, 3}), domain_error);
    CHECK_THROWS_AS(ChainId::odd_banks_martin(2, {9}), domain_error);
    CHECK(parse_chain("vm").kind == ChainKind::von_mangoldt);
    CHECK(parse_chain("obm", 3, {5, 3}).Q == std::vector<u32>{3, 5});
    CHECK_THROWS_AS(parse_chain("nope"), domain_error);
}

TEST_CASE("rows sum to one and only move to proper divisors")
{
    const FactorTable& t = test::table();
    for (const ChainId& c : all_chains())
        for (u64 n = 1; n <= 3000; ++n) {
            if (!in_state_space(c, n, t)) continue;
            TransitionList l = transitions_down(c, n, t);
            REQUIRE(std::abs(l.sum() - 1) <= 1e-12);
            for (const Transition& tr : l.entries) {
                REQUIRE(n % tr.target == 0);
                REQUIRE(in_state_space(c, tr.target, t));
                REQUIRE((tr.target < n || is_absorbing(c, n, t)));
            }
        }
}

TEST_CASE("parent probabilities agree with the forward law")
{
    const FactorTable& t = test::table();
    const std::vector<PrimePower> pp = prime_powers_up_to(200, t);
    for (const ChainId& c : all_chains())
        for (u64 m = 1; m <= 300; ++m) {
            if (!in_state_space(c, m, t)) continue;
            for (const PrimePower& q : pp) {
                const u64 n = m * q.q;
                double forward = 0;
                if (in_state_space(c, n, t) && !is_absorbing(c, n, t)) forward = as_map(transitions_down(c, n, t))[m];
                // a VM jump n -> m can only come from the single q = n/m
                REQUIRE(parent_prob(c, m, q, t) == doctest::Approx(forward).epsilon(1e-12));
            }
        }
}

TEST_CASE("sub-invariance margins")
{
    const FactorTable& t = test::table();
    ParentCache cache = make_parent_cache(100000, t);
    Weight w0(WeightId::nu0(), t);
    Weight w2(WeightId::shifted(2), t);
    Weight wm(WeightId::mertens(), t);
    for (u64 n = 2; n <= 300; ++n) {
        SubinvarianceReport r = subinvariance_margin(ChainId::von_mangoldt(), w0, n, cache);
        REQUIRE(r.lower <= r.upper);
        REQUIRE(r.lower >= -1e-9);
        REQUIRE(subinvariance_margin(ChainId::von_mangoldt(), w2, n, cache).lower >= -1e-9);
        REQUIRE(subinvariance_margin(ChainId::eps_modified(), w0, n, cache).lower >= -1e-9);
    }
    // the Mertens weight is exactly invariant for the Mertens chain
    for (u64 n = 1; n <= 200; ++n) {
        SubinvarianceReport r = subinvariance_margin(ChainId::mertens(), wm, n, cache);
        REQUIRE(std::abs(r.lower) < 1e-9);
        REQUIRE(std::abs(r.upper) < 1e-9);
    }
    CHECK_THROWS_AS(subinvariance_margin(ChainId::random_prime(), w0, 6, cache), unsupported_combination);
}

TEST_CASE("nu_Lambda is invariant for the von Mangoldt chain")
{
    const FactorTable& t = test::table();
    ParentCache cache = make_parent_cache(20000, t);
    Weight wl(WeightId::lambda(1e-12), t, {}, 1000);
    for (u64 n : {2ull, 3ull, 12ull, 97ull, 360ull}) {
        SubinvarianceReport r = subinvariance_margin(ChainId::von_mangoldt(), wl, n, cache);
        CHECK(r.lower <= 0);
        CHECK(r.upper >= 0);
        CHECK(r.upper - r.lower < 1e-6);
    }
}

TEST_CASE("adjoint transitions")
{
    const FactorTable& t = test::table();
    Weight w0(WeightId::nu0(), t);
    TransitionList up = adjoint_transitions(ChainId::von_mangoldt(), w0, 6, 10000);
    CHECK(up.entries.back().target == kInfinity);
    CHECK(up.sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i + 1 < up.entries.size(); ++i) CHECK(up.entries[i].target % 6 == 0);
    // detailed balance: nu(6) P(6 up 12) = nu(12) P(12 down 6)
    double p12 = 0;
    for (const Transition& tr : up.entries)
        if (tr.target == 12) p12 = tr.prob;
    CHECK(nu0(6) * p12 == doctest::Approx(nu0(12) * std::log(2.0) / std::log(12.0)).epsilon(1e-12));

    ChainId obm = ChainId::odd_banks_martin(2, {3, 5, 7});
    TransitionList o = adjoint_transitions(obm, w0, 15, 100);
    CHECK(o.entries.size() == 4);
    CHECK_FALSE(o.tail_folded);
}

TEST_CASE("nu0 is decreasing and dilation shrinks it")
{
    for (u64 n = 2; n < 5000; ++n) REQUIRE(nu0(n + 1) < nu0(n));
    for (u64 n = 2; n <= 200; ++n)
        for (u64 d = 1; d <= 50; ++d) REQUIRE(nu0(d * n) <= nu0(n) / double(d));
}

TEST_CASE("Mertens weight telescopes on n <= 10^4")
{
    const FactorTable& t = test::table();
    ParentCache cache = make_parent_cache(3000, t);
    Weight wm(WeightId::mertens(), t);
    for (u64 n = 1; n <= 10000; ++n) {
        SubinvarianceReport r = subinvariance_margin(ChainId::mertens(), wm, n, cache);
        REQUIRE(std::abs(r.lower) <= 1e-9 * std::max(1.0, r.weight));
    }
}

TEST_CASE("eps_modified agrees with von_mangoldt away from prime powers")
{
    const FactorTable& t = test::table();
    for (u64 n = 2; n <= 5000; ++n) {
        if (prime_power_base(n, t) != 0) continue;
        REQUIRE(as_map(transitions_down(ChainId::eps_modified(), n, t)) ==
                as_map(transitions_down(ChainId::von_mangoldt(), n, t)));
    }
}

TEST_CASE("sub-invariance holds on [2, 10^4] with certified tails")
{
    const FactorTable& t = test::table();
    ParentCache cache = make_parent_cache(100000, t);
    Weight w0(WeightId::nu0(), t);
    const ChainId obm = ChainId::odd_banks_martin(2, {3, 5, 7, 11});
    for (u64 m = 2; m <= 10000; ++m) {
        REQUIRE(subinvariance_margin(ChainId::von_mangoldt(), w0, m, cache).lower >= -1e-9);
        REQUIRE(subinvariance_margin(ChainId::eps_modified(), w0, m, cache).lower >= -1e-9);
        if (in_state_space(obm, m, t)) REQUIRE(subinvariance_margin(obm, w0, m, cache).lower >= -1e-9);
    }
}
