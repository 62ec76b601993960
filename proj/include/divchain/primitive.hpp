#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "divchain/arith.hpp"

namespace divchain {

struct PrimitiveSet {
    std::vector<u64> elements;  // strictly ascending, each >= 2
    bool certified = false;
};

// Sorts and removes duplicates.
std::vector<u64> normalize_set(std::vector<u64> A);

// No element divides another. Throws domain_error when 1 is present.
bool is_primitive(const std::vector<u64>& A);

// Validates and certifies.
PrimitiveSet make_primitive(std::vector<u64> A);

// {n <= X : Omega(n) = k, every prime factor in Q when Q is given}; k = 0 yields {1}.
PrimitiveSet generate_layer(int k, u64 X, const std::optional<std::vector<u32>>& Q, const FactorTable& t);

PrimitiveSet restrict_Q(const PrimitiveSet& A, const std::vector<u32>& Q, const FactorTable& t);

// Greedy antichain over a seeded shuffle of [2, X], each candidate kept with probability density.
PrimitiveSet random_antichain(u64 X, double density, u64 seed);

// Greedy antichain drawn from a given pool (same rule as random_antichain).
PrimitiveSet random_antichain_from(const std::vector<u64>& pool, double density, u64 seed, u64 stream = 0);

// Layer i holds the elements whose longest divisor chain inside A ending at them has length i.
std::vector<PrimitiveSet> peel_layers(const std::vector<u64>& A);

// One integer per line; blank lines, # comments and a leading "n" header are skipped.
std::vector<u64> read_integer_set(std::istream& in);
void write_integer_set(std::ostream& out, const std::vector<u64>& A);

}  // namespace divchain
