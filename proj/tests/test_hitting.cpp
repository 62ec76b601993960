#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>

#include "divchain/error.hpp"
#include "divchain/hitting.hpp"
#include "divchain/primitive.hpp"
#include "divchain/rng.hpp"
#include "support.hpp"

using namespace divchain;

namespace {

// Visit probabilities by enumerating every downward path from n0.
std::map<u64, double> enumerate_visits(const ChainId& c, u64 n0, const FactorTable& t)
{
    std::map<u64, double> visits;
    std::function<void(u64, double)> walk = [&](u64 n, double p) {
        visits[n] += p;
        if (is_absorbing(c, n, t)) return;
        for (const Transition& tr : transitions_down(c, n, t).entries) walk(tr.target, p * tr.prob);
    };
    walk(n0, 1.0);
    return visits;
}

}  // namespace

TEST_CASE("downward hitting masses match path enumeration")
{
    const FactorTable& t = test::table();
    for (const ChainId& c : {ChainId::von_mangoldt(), ChainId::eps_modified(), ChainId::random_prime(),
                             ChainId::mertens(), ChainId::odd_banks_martin(2, {3, 5, 7})})
        for (u64 n0 : {360ull, 945ull, 1024ull}) {
            if (!in_state_space(c, n0, t)) continue;
            MassVector h = hitting_down(c, MassVector::unit(n0, n0), n0, t);
            std::map<u64, double> oracle = enumerate_visits(c, n0, t);
            for (u64 n = 1; n <= n0; ++n) REQUIRE(h[n] == doctest::Approx(oracle.count(n) ? oracle[n] : 0.0).epsilon(1e-12));
            CHECK(absorbed_mass(c, h, t) == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("hitting 3 from 12 under the von Mangoldt chain")
{
    const FactorTable& t = test::table();
    MassVector h = hitting_down(ChainId::von_mangoldt(), MassVector::unit(12, 12), 12, t);
    const double direct = std::log(2.0) / std::log(12.0);
    // 12 -> 3 directly, or 12 -> 6 -> 3
    CHECK(h[3] == doctest::Approx(direct + direct * std::log(2.0) / std::log(6.0)).epsilon(1e-14));
    CHECK(h[1] == doctest::Approx(1.0));
    HitOptions opt;
    opt.report_absorbing = false;
    CHECK(hitting_down(ChainId::von_mangoldt(), MassVector::unit(12, 12), 12, t, opt)[1] == 0.0);
}

TEST_CASE("initial mass is validated")
{
    const FactorTable& t = test::table();
    MassVector b = MassVector::zeros(10);
    b.at(4) = -1;
    CHECK_THROWS_AS(hitting_down(ChainId::von_mangoldt(), b, 10, t), domain_error);
    CHECK_THROWS_AS(hitting_down(ChainId::eps_modified(), MassVector::unit(10, 1), 10, t), domain_error);
    CHECK_THROWS_AS(hitting_down(ChainId::von_mangoldt(), MassVector::unit(20, 15), 10, t), domain_error);
    CHECK_THROWS_AS(MassVector::unit(5, 6), domain_error);
}

TEST_CASE("Erdos sums")
{
    const FactorTable& t = test::table();
    CHECK(erdos_sum({2, 3}, WeightId::nu0(), t) == doctest::Approx(nu0(2) + nu0(3)));
    CHECK_THROWS_AS(erdos_sum({1, 3}, WeightId::nu0(), t), domain_error);
    std::vector<double> s = prime_erdos_sums(1000000, {10, 1000, 1000000});
    double direct = 0;
    for (u32 p : t.primes()) {
        if (p > 1000) break;
        direct += nu0(p);
    }
    CHECK(s[0] == doctest::Approx(nu0(2) + nu0(3) + nu0(5) + nu0(7)));
    CHECK(s[1] == doctest::Approx(direct).epsilon(1e-14));
    CHECK(s[2] > s[1]);
    CHECK(s[2] < 1.6366164);
    CHECK_THROWS_AS(prime_erdos_sums(100, {50, 10}), domain_error);
}

TEST_CASE("the downward construction reproduces nu0")
{
    const FactorTable& t = test::table();
    const u64 x = 20, X = 2000;
    MassVector b = mass_1196(x, X, t);
    for (u64 n = x; n <= X; ++n) CHECK(b[n] >= 0);
    MassVector h = hitting_down(ChainId::von_mangoldt(), b, X, t);
    double worst = 0;
    for (u64 n = x; n <= X; ++n) worst = std::max(worst, std::abs(h[n] - nu0(n)));
    CHECK(worst <= 1e-12);
}

TEST_CASE("bound on Erdos sums of primitive sets above x")
{
    const FactorTable& t = test::table();
    const u64 x = 30, X = 3000;
    // direct double loop over r
    double naive = 0;
    for (u64 r = x; r <= X; ++r) {
        double s = 0;
        for (u64 q : divisors(r, t))
            if (r / q < x) s += lambda(q, t);
        const double lr = std::log(double(r));
        naive += s / (double(r) * lr * lr);
    }
    const double B = bound_1196(x, X, t);
    CHECK(B == doctest::Approx(naive).epsilon(1e-12));
    // every primitive set in [x, X] stays below the bound
    for (u64 seed = 1; seed <= 20; ++seed) {
        std::vector<u64> pool;
        for (u64 n = x; n <= X; ++n) pool.push_back(n);
        PrimitiveSet A = random_antichain_from(pool, 0.7, seed);
        CHECK(erdos_sum(A.elements, WeightId::nu0(), t) <= B);
    }
    CHECK(erdos_sum(generate_layer(2, X, std::nullopt, t).elements, WeightId::nu0(), t) > 0);
    CHECK_THROWS_AS(bound_1196(1, 100, t), domain_error);
}

TEST_CASE("upward hitting reproduces the weight for the named setups")
{
    const FactorTable& t = test::table();
    for (const char* name : {"eps", "obm", "nu2"}) {
        AdjointSetup s = adjoint_setup(name, 3000, t);
        Weight w(s.weight, t);
        MassVector h = hitting_up(s.chain, w, s.b, 3000);
        for (u64 n = 1; n <= 3000; ++n)
            if (in_state_space(s.chain, n, t) && !(s.weight.kind == WeightKind::nu0 && n < 2))
                REQUIRE(std::abs(h[n] - w(n)) <= 1e-10 * w(n));
    }
    CHECK_THROWS_AS(adjoint_setup("bogus", 100, t), domain_error);
}

TEST_CASE("random-prime chain masses are LYM weights")
{
    const FactorTable& t = test::table();
    const u64 n0 = 2 * 3 * 5 * 7;
    std::map<u64, Rational> h = lym_masses(n0, t);
    const long long binom[5] = {1, 4, 6, 4, 1};
    for (auto& [d, v] : h) CHECK(v == Rational(1, binom[factorize(d, t).big_omega()]));
    CHECK_THROWS_AS(lym_masses(12, t), domain_error);

    SpernerCheck sc = sperner_check({6, 10, 14, 15, 21, 35}, n0, t);
    CHECK(sc.count == 6);
    CHECK(sc.bound == 6);
    CHECK(sc.lym_sum == Rational(1));
    CHECK(sc.holds());
}

TEST_CASE("cut capacity")
{
    const FactorTable& t = test::table();
    Weight w(WeightId::nu0(), t);
    std::vector<u64> S;
    for (u64 n = 50; n <= 400; ++n) S.push_back(n);
    PrimitiveSet A = generate_layer(2, 400, std::nullopt, t);
    CutCapacity cc = cut_capacity(ChainId::von_mangoldt(), w, S, A.elements);
    CHECK(cc.lhs <= cc.rhs + 1e-10);
    CHECK_THROWS_AS(cut_capacity(ChainId::von_mangoldt(), w, S, {2, 4}), domain_error);
    CHECK_THROWS_AS(cut_capacity(ChainId::eps_modified(), w, {7}, {}), domain_error);
}

TEST_CASE("flow divergence brackets")
{
    const FactorTable& t = test::table();
    ParentCache cache = make_parent_cache(100000, t);
    for (u64 n : {2ull, 12ull, 999ull}) {
        FlowDivergence f = flow_divergence(n, cache, t);
        CHECK(f.outflow == doctest::Approx(nu0(n)).epsilon(1e-12));
        CHECK(f.inflow_lo <= f.inflow_hi);
        CHECK(f.inflow_hi <= f.outflow);
    }
    CHECK_THROWS_AS(flow_divergence(1, cache, t), domain_error);
}

TEST_CASE("mass conservation and the antichain bound")
{
    const FactorTable& t = test::table();
    Philox rng(21, 0);
    const u64 X = 1500;
    for (int rep = 0; rep < 20; ++rep) {
        for (const ChainId& c : {ChainId::von_mangoldt(), ChainId::eps_modified(), ChainId::mertens(),
                                 ChainId::random_prime(), ChainId::odd_banks_martin(2, {3, 5, 7})}) {
            MassVector b = MassVector::zeros(X);
            std::vector<u64> pool;
            for (u64 n = 2; n <= X; ++n) {
                if (!in_state_space(c, n, t)) continue;
                pool.push_back(n);
                if (rng.uniform() < 0.05) b.at(n) = rng.uniform();
            }
            MassVector h = hitting_down(c, b, X, t);
            REQUIRE(absorbed_mass(c, h, t) == doctest::Approx(b.total()).epsilon(1e-9));
            PrimitiveSet A = random_antichain_from(pool, 0.5, 21, static_cast<u64>(rep));
            double s = 0;
            for (u64 a : A.elements) s += h[a];
            REQUIRE(s <= b.total() + 1e-10);
        }
        // upward: the eps setup carries total mass sum_p nu0(p)
        AdjointSetup up = adjoint_setup("eps", X, t);
        Weight w(up.weight, t);
        MassVector h = hitting_up(up.chain, w, up.b, X);
        std::vector<u64> pool;
        for (u64 n = 2; n <= X; ++n) pool.push_back(n);
        PrimitiveSet A = random_antichain_from(pool, 0.3 + 0.7 * rng.uniform(), 22, static_cast<u64>(rep));
        double s = 0;
        for (u64 a : A.elements) s += h[a];
        REQUIRE(s <= up.b.total() + 1e-10);
    }
}

TEST_CASE("LYM masses sum to one on each layer")
{
    const FactorTable& t = test::table();
    const u64 n0 = 2 * 3 * 5 * 7 * 11 * 13 * 17;
    std::map<int, Rational> layer;
    for (auto& [d, v] : lym_masses(n0, t)) layer[factorize(d, t).big_omega()] += v;
    CHECK(layer.size() == 8);
    for (auto& [k, v] : layer) CHECK(v == Rational(1));
}

TEST_CASE("mass_1196 is nonnegative")
{
    const FactorTable& t = test::table();
    for (u64 x : {2ull, 10ull, 100ull}) {
        MassVector b = mass_1196(x, 20000, t);
        CHECK(b.values.minCoeff() >= 0);
    }
}
