#pragma once

#include <cstdint>
#include <vector>

namespace ppoly {

/// Largest i with 2^i dividing n. Throws InvalidArgument for n <= 0.
unsigned ord2(std::int64_t n);

bool is_prime(std::uint64_t n);

/// Distinct prime divisors of n in ascending order, by trial division.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
};

/// Full factorization of n >= 1 by trial division; empty for n == 1.
std::vector<PrimePower> factorize(std::uint64_t n);

/// base^exp, throwing InvalidArgument if the result would not fit in 64 bits.
std::uint64_t checked_pow(std::uint64_t base, unsigned exp);

/// Mathematical (non-negative) residue of a modulo m > 0.
std::uint64_t mod_floor(std::int64_t a, std::uint64_t m);

}  // namespace ppoly
