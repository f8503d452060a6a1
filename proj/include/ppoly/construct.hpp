#pragma once

// Checked factories for permutation polynomials X^r B(X^{q-1}) of F_{q^2}
// built from a seed permutation X^v D(X)^{q-1} of mu_{q+1} and multiplier
// factors sum_{j=0}^{s} X^{j t}.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppoly/mu.hpp"
#include "ppoly/poly.hpp"

namespace ppoly {

enum class SeedProvenance { Lemma4Variant1, Lemma4Variant2, UserSupplied };

enum class Branch { Cor31, Cor32, Cor51, Cor52 };

std::string to_string(SeedProvenance p);
std::string to_string(Branch b);

/// X^v D(X)^{q-1} permutes mu_{q+1}.
struct SeedPermutation {
  std::int64_t v;
  Polynomial d;
  SeedProvenance provenance;

  const Field& field() const noexcept { return d.owner(); }
};

/// Checks the permutation property on mu; throws PreconditionFailed if it
/// does not hold.
SeedPermutation make_seed(std::int64_t v, Polynomial d, const MuGroup& mu);

/// Characteristic-2 seed family: q = 2^k, Q = 2^ell, v = Q+1 and
/// D = X^{Q+1} + X + 1 (variant 1) or D = X^Q + X + 1 (variant 2).
struct Lemma4Params {
  unsigned k;
  unsigned ell;
  int variant;

  std::uint64_t q() const { return std::uint64_t{1} << k; }
  std::uint64_t big_q() const { return std::uint64_t{1} << ell; }
};

/// Variant 1 needs ord2(ell) <= ord2(k); variant 2 needs ord2(ell) != ord2(k).
bool lemma4_condition(const Lemma4Params& params);

struct ConstructOptions {
  /// Re-check results with the brute-force oracle when the field fits the cap.
  bool verify = true;
  Limits limits{};
};

/// Throws PreconditionFailed when the variant condition fails and
/// InternalInconsistency when the seed does not permute mu_{q+1}.
SeedPermutation lemma4_seed(const Lemma4Params& params, const ConstructOptions& options = {});

/// gcd(s+1, q) = 1 and (q+1)/gcd(t, q+1) coprime to s+1.
bool lemma2_condition(std::uint64_t s, std::uint64_t t, std::uint64_t q);

/// Both sides of the multiplier criterion, computed independently.
struct Lemma2Outcome {
  bool left;   ///< X^r B(X)^{q-1} permutes mu, B = A * prod multipliers
  bool right;  ///< X^{r - sum s_i t_i} A(X)^{q-1} permutes mu and every condition holds
  bool agree() const noexcept { return left == right; }
};

Lemma2Outcome lemma2_check(std::int64_t r, const Polynomial& a, std::span<const MultiplierSpec> specs,
                           const MuGroup& mu);

/// Least positive r with r = residue (mod q+1) and gcd(r, q-1) = 1. Throws
/// PreconditionFailed when no such r exists (q odd and residue even).
std::uint64_t smallest_valid_r(std::int64_t residue, std::uint64_t q);

/// Every r in [1, bound) with r = residue (mod q+1) and gcd(r, q-1) = 1.
std::vector<std::uint64_t> valid_r_below(std::int64_t residue, std::uint64_t q, std::uint64_t bound);

struct ConstructionResult {
  std::uint64_t r;
  Polynomial b;
  /// X^r B(X^{q-1}) reduced mod X^{q^2} - X.
  Polynomial f;
  Branch branch;
  std::int64_t v;
  Polynomial d;
  SeedProvenance seed;
  std::vector<MultiplierSpec> specs;
  /// Oracle verdict; empty when verification was off or the field too large.
  std::optional<bool> verified;
};

/// B = D * prod multipliers with r = v + sum s_i t_i (mod q+1).
ConstructionResult cor3_product(const SeedPermutation& seed, std::span<const MultiplierSpec> specs, std::uint64_t r,
                                const ConstructOptions& options = {});

/// B = D / prod multipliers with r = v - sum s_i t_i (mod q+1). Throws
/// NotDivisible when the product does not divide D.
ConstructionResult cor3_quotient(const SeedPermutation& seed, std::span<const MultiplierSpec> specs,
                                 std::uint64_t r, const ConstructOptions& options = {});

/// The m = 1, s = 2 specialization over q = 2^k with k even. Branch 1 takes
/// B = D (X^{2t} + X^t + 1); branch 2 takes B = D / (X^2 + X + 1). When r is
/// absent the smallest valid r is used.
ConstructionResult cor5(unsigned k, unsigned ell, int variant, int branch, std::optional<std::uint64_t> t,
                        std::optional<std::uint64_t> r, const ConstructOptions& options = {});

}  // namespace ppoly
