#include "ppoly/numeric.hpp"

#include <limits>

#include "ppoly/errors.hpp"

namespace ppoly {

unsigned ord2(std::int64_t n) {
  if (n <= 0) throw InvalidArgument("ord2 requires a positive integer, got " + std::to_string(n));
  unsigned i = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++i;
  }
  return i;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<PrimePower> factorize(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("cannot factorize 0");
  std::vector<PrimePower> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.push_back({d, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (const auto& pp : factorize(n)) out.push_back(pp.prime);
  return out;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t result = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) {
      throw InvalidArgument("integer power overflows 64 bits");
    }
    result *= base;
  }
  return result;
}

std::uint64_t mod_floor(std::int64_t a, std::uint64_t m) {
  if (m == 0) throw InvalidArgument("modulus must be positive");
  const auto sm = static_cast<std::int64_t>(m);
  std::int64_t r = a % sm;
  if (r < 0) r += sm;
  return static_cast<std::uint64_t>(r);
}

}  // namespace ppoly
