#pragma once

#include <cstdint>
#include <vector>

#include "ppoly/gf.hpp"
#include "ppoly/poly.hpp"

namespace ppoly {

/// Size caps for exhaustive work. The default refuses to scan fields with
/// more than 2^26 elements.
struct Limits {
  std::uint64_t max_scan_size = std::uint64_t{1} << 26;
};

/// Throws ResourceLimit naming the field size if it exceeds the cap.
void require_scannable(const FieldSpec& field, const Limits& limits);

/// The subgroup mu_{q+1} of (q+1)-th roots of unity in F_{q^2}.
class MuGroup {
 public:
  MuGroup(Field field, std::vector<Elem> elements);

  const Field& field() const noexcept { return field_; }
  std::uint64_t q() const noexcept { return q_; }
  /// Ascending by packed value.
  const std::vector<Elem>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }

  /// Position of x in elements(), or -1 if x is not in the group.
  std::ptrdiff_t index_of(Elem x) const;
  bool contains(Elem x) const { return index_of(x) >= 0; }

 private:
  Field field_;
  std::uint64_t q_;
  std::vector<Elem> elements_;
};

enum class MuMode {
  Scan,  ///< test x^{q+1} = 1 for every element of the field
  Fast,  ///< powers of g^{q-1} for a primitive element g
};

/// Throws InvalidArgument for a field without quadratic structure and, in
/// Scan mode, ResourceLimit when the field exceeds the cap.
MuGroup enumerate_mu(const Field& field, MuMode mode = MuMode::Fast, const Limits& limits = {});

/// Whether x -> x^r * A(x)^{q-1} permutes mu. Negative r is read mod q+1.
/// False as soon as A vanishes somewhere on mu.
bool permutes_mu(std::int64_t r, const Polynomial& a, const MuGroup& mu);

/// Ground truth: evaluates f on every element of its field and checks that
/// no value repeats. Throws ResourceLimit when the field exceeds the cap.
bool is_permutation_bruteforce(const Polynomial& f, const Limits& limits = {});

/// X^r * A(X^{q-1}) reduced mod X^{q^2} - X.
Polynomial lemma1_polynomial(std::uint64_t r, const Polynomial& a);

/// gcd(r, q-1) == 1 and X^r A(X)^{q-1} permutes mu_{q+1}, which is
/// equivalent to X^r A(X^{q-1}) permuting F_{q^2}. Throws InvalidArgument
/// for r <= 0.
bool lemma1_check(std::int64_t r, const Polynomial& a, const MuGroup& mu);
bool lemma1_check(std::int64_t r, const Polynomial& a);

}  // namespace ppoly
