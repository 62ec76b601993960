#include "divchain/primitive.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>

#include "divchain/error.hpp"
#include "divchain/rng.hpp"

namespace divchain {

namespace {

// Dense scans are used while max(A) stays below this; beyond it the pairwise test runs.
constexpr u64 kDenseLimit = u64(1) << 25;

bool sieve_check(const std::vector<u64>& A)
{
    const u64 M = A.back();
    std::vector<char> in(M + 1, 0);
    for (u64 a : A) in[a] = 1;
    for (u64 a : A)
        for (u64 m = 2 * a; m <= M; m += a)
            if (in[m]) return false;
    return true;
}

bool pairwise_check(const std::vector<u64>& A)
{
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = i + 1; j < A.size(); ++j)
            if (A[j] % A[i] == 0) return false;
    return true;
}

}  // namespace

std::vector<u64> normalize_set(std::vector<u64> A)
{
    std::sort(A.begin(), A.end());
    A.erase(std::unique(A.begin(), A.end()), A.end());
    return A;
}

bool is_primitive(const std::vector<u64>& input)
{
    std::vector<u64> A = normalize_set(input);
    if (A.empty()) return true;
    if (A.front() == 0) throw domain_error("0 is not allowed in a primitive set");
    if (A.front() == 1) throw domain_error("1 is excluded from primitive sets");
    // the multiples scan costs about M log M; use it when that beats |A|^2
    const double M = double(A.back()), sz = double(A.size());
    if (A.back() <= kDenseLimit && M * std::log(M) < sz * sz) return sieve_check(A);
    return pairwise_check(A);
}

PrimitiveSet make_primitive(std::vector<u64> A)
{
    A = normalize_set(std::move(A));
    if (!is_primitive(A)) throw domain_error("set is not primitive");
    return {std::move(A), true};
}

PrimitiveSet generate_layer(int k, u64 X, const std::optional<std::vector<u32>>& Q, const FactorTable& t)
{
    if (k < 0) throw domain_error("layer index must be >= 0");
    if (X > t.limit()) throw domain_error("layer range exceeds the sieve");
    PrimitiveSet out;
    out.certified = true;
    if (k == 0) {
        if (X >= 1) out.elements.push_back(1);
        return out;
    }
    std::vector<u32> allowed;
    if (Q) allowed = std::vector<u32>(Q->begin(), Q->end()), std::sort(allowed.begin(), allowed.end());
    for (u64 n = 2; n <= X; ++n) {
        Factorization f = factorize(n, t);
        if (f.big_omega() != k) continue;
        if (Q) {
            bool ok = true;
            for (auto& [p, e] : f.pv) ok = ok && std::binary_search(allowed.begin(), allowed.end(), static_cast<u32>(p));
            if (!ok) continue;
        }
        out.elements.push_back(n);
    }
    return out;
}

PrimitiveSet restrict_Q(const PrimitiveSet& A, const std::vector<u32>& Q, const FactorTable& t)
{
    std::vector<u32> allowed(Q.begin(), Q.end());
    std::sort(allowed.begin(), allowed.end());
    PrimitiveSet out;
    out.certified = A.certified;
    for (u64 a : A.elements) {
        bool ok = true;
        for (auto& [p, e] : factorize(a, t).pv)
            ok = ok && std::binary_search(allowed.begin(), allowed.end(), static_cast<u32>(p));
        if (ok) out.elements.push_back(a);
    }
    return out;
}

PrimitiveSet random_antichain_from(const std::vector<u64>& pool_in, double density, u64 seed, u64 stream)
{
    if (!(density > 0 && density <= 1)) throw domain_error("density must lie in (0, 1]");
    std::vector<u64> pool = normalize_set(pool_in);
    if (!pool.empty() && pool.front() < 2) throw domain_error("pool must consist of integers >= 2");
    Philox rng(seed, stream);
    // Fisher-Yates with the counter-based stream
    for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
    std::vector<u64> admitted;
    const u64 M = pool.empty() ? 0 : *std::max_element(pool.begin(), pool.end());
    const bool dense = M <= kDenseLimit;
    std::vector<char> covered(dense ? M + 1 : 0, 0);  // divisors and multiples of admitted elements
    for (u64 n : pool) {
        if (rng.uniform() >= density) continue;
        if (dense) {
            if (covered[n]) continue;
            admitted.push_back(n);
            for (u64 m = n; m <= M; m += n) covered[m] = 1;
            for (u64 d = 1; d * d <= n; ++d)
                if (n % d == 0) covered[d] = covered[n / d] = 1;
        } else {
            bool ok = true;
            for (u64 a : admitted) ok = ok && (a % n != 0) && (n % a != 0);
            if (ok) admitted.push_back(n);
        }
    }
    return {normalize_set(std::move(admitted)), true};
}

PrimitiveSet random_antichain(u64 X, double density, u64 seed)
{
    if (X < 4) throw domain_error("random_antichain needs X >= 4");
    std::vector<u64> pool(X - 1);
    std::iota(pool.begin(), pool.end(), u64(2));
    return random_antichain_from(pool, density, seed);
}

std::vector<PrimitiveSet> peel_layers(const std::vector<u64>& input)
{
    std::vector<u64> A = normalize_set(input);
    if (!A.empty() && A.front() < 2) throw domain_error("peel_layers expects elements >= 2");
    // depth(a) = 1 + max depth of a proper divisor of a inside A, processed in increasing order
    std::vector<int> depth(A.size(), 1);
    const bool dense = !A.empty() && A.back() <= kDenseLimit &&
                       double(A.back()) * std::log(double(A.back())) < double(A.size()) * double(A.size());
    if (dense) {
        std::vector<int> at(A.back() + 1, 0);  // 1 + index, 0 when absent
        for (std::size_t i = 0; i < A.size(); ++i) at[A[i]] = static_cast<int>(i) + 1;
        for (std::size_t i = 0; i < A.size(); ++i)
            for (u64 m = 2 * A[i]; m <= A.back(); m += A[i])
                if (at[m]) depth[at[m] - 1] = std::max(depth[at[m] - 1], depth[i] + 1);
    } else {
        for (std::size_t j = 0; j < A.size(); ++j)
            for (std::size_t i = 0; i < j; ++i)
                if (A[j] % A[i] == 0) depth[j] = std::max(depth[j], depth[i] + 1);
    }
    int layers = depth.empty() ? 0 : *std::max_element(depth.begin(), depth.end());
    std::vector<PrimitiveSet> out(static_cast<std::size_t>(layers));
    for (std::size_t i = 0; i < A.size(); ++i) out[depth[i] - 1].elements.push_back(A[i]);
    for (auto& L : out) L.certified = true;
    return out;
}

std::vector<u64> read_integer_set(std::istream& in)
{
    std::vector<u64> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        auto e = line.find_last_not_of(" \t\r");
        std::string tok = line.substr(b, e - b + 1);
        // a one-column CSV header, as written by `prim generate`
        if (std::exchange(first, false) && tok == "n") continue;
        if (tok.find_first_not_of("0123456789") != std::string::npos)
            throw domain_error("expected one decimal integer per line, got '" + tok + "'");
        out.push_back(std::stoull(tok));
    }
    return out;
}

void write_integer_set(std::ostream& out, const std::vector<u64>& A)
{
    for (u64 a : A) out << a << '\n';
}

}  // namespace divchain
