#pragma once

// Prime-power finite fields F_{p^n} with exact element arithmetic.
//
// An element is stored packed: the coordinates (c_0, ..., c_{n-1}) in the
// power basis of the modulus are the base-p digits of a single integer,
// c_0 least significant. The packed integer is also the textual form used
// for coefficients in polynomial I/O.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ppoly {

using Elem = std::uint32_t;

/// Dense polynomial over F_p, coefficients listed from degree 0 upwards.
using PrimeFieldPoly = std::vector<std::uint32_t>;

/// Irreducibility over F_p (Rabin's test). Throws InvalidArgument for a zero
/// or constant polynomial, or when a coefficient is not reduced mod p.
bool is_irreducible(const PrimeFieldPoly& f, std::uint32_t p);

/// Fields larger than this get no log tables and fall back to polynomial
/// arithmetic on the coordinates.
inline constexpr std::uint64_t kLogTableMaxSize = std::uint64_t{1} << 20;

class FieldSpec {
 public:
  /// Wraps a monic irreducible modulus of degree n >= 1. Throws
  /// InvalidArgument if p is not prime, the modulus is not monic and
  /// irreducible, or p^n exceeds 2^32.
  static std::shared_ptr<const FieldSpec> from_modulus(std::uint32_t p, PrimeFieldPoly modulus);

  FieldSpec(const FieldSpec&) = delete;
  FieldSpec& operator=(const FieldSpec&) = delete;

  std::uint32_t p() const noexcept { return p_; }
  unsigned n() const noexcept { return n_; }
  /// p^n.
  std::uint64_t size() const noexcept { return size_; }
  const PrimeFieldPoly& modulus() const noexcept { return modulus_; }

  /// Quadratic structure: set whenever n is even, with n = 2k and q = p^k.
  bool is_quadratic() const noexcept { return k_.has_value(); }
  std::optional<unsigned> k() const noexcept { return k_; }
  /// q = p^k; throws InvalidArgument when n is odd.
  std::uint64_t q() const;

  /// A primitive element (generator of the multiplicative group).
  Elem generator() const noexcept { return generator_; }
  bool has_log_tables() const noexcept { return !exp_.empty(); }

  bool contains(Elem a) const noexcept { return a < size_; }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  /// Throws DivisionByZero for a == 0.
  Elem inv(Elem a) const;
  /// a^e with 0^0 = 1. Throws DivisionByZero for a == 0 and e < 0.
  Elem pow(Elem a, std::int64_t e) const;

  /// Product by multiplying coordinate polynomials and reducing by the
  /// modulus; never touches the log tables.
  Elem mul_reference(Elem a, Elem b) const;
  /// Inverse by extended Euclid on the coordinate polynomial.
  Elem inv_reference(Elem a) const;

  std::vector<std::uint32_t> coordinates(Elem a) const;
  /// Packs coordinates; missing high coordinates are zero. Throws
  /// InvalidArgument for too many coordinates or one not reduced mod p.
  Elem from_coordinates(std::span<const std::uint32_t> coords) const;

 private:
  FieldSpec(std::uint32_t p, PrimeFieldPoly modulus);

  Elem pow_reference(Elem a, std::uint64_t e) const;
  void find_generator();
  void build_tables();

  std::uint32_t p_;
  unsigned n_;
  std::uint64_t size_;
  PrimeFieldPoly modulus_;
  std::optional<unsigned> k_;
  std::vector<std::uint64_t> place_;  // p^i for i < n
  std::uint64_t modulus_bits_ = 0;    // modulus as a bit mask, p == 2 only
  Elem generator_ = 1;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> exp_;
};

using Field = std::shared_ptr<const FieldSpec>;

/// F_{p^n} whose modulus is the smallest monic irreducible of degree n,
/// ordering candidates by their lower coefficients read as a base-p integer
/// (degree 0 least significant). Throws InvalidArgument for non-prime p,
/// n == 0, or p^n > 2^32.
Field make_field(std::uint32_t p, unsigned n);

/// F_{q^2} with q = p^k.
inline Field make_quadratic_field(std::uint32_t p, unsigned k) { return make_field(p, 2 * k); }

/// Memoized make_field; safe to call from several threads.
Field cached_field(std::uint32_t p, unsigned n);

class FieldElement {
 public:
  FieldElement(Field owner, Elem value);

  static FieldElement zero(Field owner) { return {std::move(owner), 0}; }
  static FieldElement one(Field owner) { return {std::move(owner), 1}; }
  static FieldElement from_coordinates(Field owner, std::span<const std::uint32_t> coords);

  const Field& owner() const noexcept { return owner_; }
  Elem value() const noexcept { return value_; }
  bool is_zero() const noexcept { return value_ == 0; }
  std::vector<std::uint32_t> coordinates() const { return owner_->coordinates(value_); }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);

  friend bool operator==(const FieldElement& a, const FieldElement& b) noexcept {
    return a.owner_ == b.owner_ && a.value_ == b.value_;
  }

 private:
  Field owner_;
  Elem value_;
};

/// Throws InvalidArgument when a and b belong to different fields.
FieldElement fe_mul(const FieldElement& a, const FieldElement& b);
/// Throws DivisionByZero for zero.
FieldElement fe_inv(const FieldElement& a);
FieldElement fe_pow(const FieldElement& a, std::int64_t e);

std::ostream& operator<<(std::ostream& os, const FieldElement& a);

/// Human-readable modulus, e.g. "X^4 + X + 1".
std::string format_prime_poly(const PrimeFieldPoly& f);

}  // namespace ppoly
