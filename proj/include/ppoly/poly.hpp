#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "ppoly/gf.hpp"

namespace ppoly {

/// Sparse univariate polynomial over a finite field: exponent -> nonzero
/// coefficient. Polynomials over the prime subfield live in the ambient
/// field with coefficients 0/1.
class Polynomial {
 public:
  using Terms = std::map<std::uint64_t, Elem>;

  /// The zero polynomial.
  explicit Polynomial(Field owner);
  /// Drops zero coefficients; throws InvalidArgument for a coefficient
  /// outside the field.
  Polynomial(Field owner, Terms terms);

  static Polynomial monomial(Field owner, std::uint64_t exponent, Elem coeff = 1);
  static Polynomial constant(Field owner, Elem c) { return monomial(std::move(owner), 0, c); }

  const Field& owner() const noexcept { return owner_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Highest exponent; throws InvalidArgument for the zero polynomial.
  std::uint64_t degree() const;
  Elem leading_coefficient() const;
  Elem coefficient(std::uint64_t exponent) const;

  /// Adds c*X^exponent in place.
  void add_term(std::uint64_t exponent, Elem c);

  friend bool operator==(const Polynomial& a, const Polynomial& b) noexcept {
    return a.owner_ == b.owner_ && a.terms_ == b.terms_;
  }

 private:
  Field owner_;
  Terms terms_;
};

/// One factor sum_{j=0}^{s} X^{j*t} of the multiplier product.
struct MultiplierSpec {
  std::uint64_t s;
  std::uint64_t t;

  friend auto operator<=>(const MultiplierSpec&, const MultiplierSpec&) = default;
};

Polynomial operator+(const Polynomial& f, const Polynomial& g);
Polynomial operator-(const Polynomial& f, const Polynomial& g);
Polynomial operator*(const Polynomial& f, const Polynomial& g);

/// c * f.
Polynomial scale(const Polynomial& f, Elem c);
/// X^shift * f.
Polynomial shift(const Polynomial& f, std::uint64_t shift);
/// f(X^m) without reduction.
Polynomial substitute_power(const Polynomial& f, std::uint64_t m);

/// Sum of c_i * x^{e_i}; the zero polynomial evaluates to 0.
FieldElement eval(const Polynomial& f, const FieldElement& x);
/// Same as eval on a packed element known to belong to f's field.
Elem eval_raw(const Polynomial& f, Elem x);

/// sum_{j=0}^{s} X^{j*t}. Throws InvalidArgument if s or t is zero.
Polynomial multiplier_poly(const MultiplierSpec& spec, const Field& owner);
/// Product of multiplier_poly over specs; 1 for an empty list.
Polynomial multiplier_product(std::span<const MultiplierSpec> specs, const Field& owner);

/// Throws InvalidArgument on an owner mismatch.
Polynomial poly_mul(const Polynomial& f, const Polynomial& g);

/// Quotient q with num = den * q. Throws DivisionByZero for den == 0 and
/// NotDivisible when the remainder is nonzero. The quotient is re-multiplied
/// and compared against num before returning.
Polynomial exact_divide(const Polynomial& num, const Polynomial& den);

/// Reduction modulo X^{q^2} - X: each exponent e > 0 becomes
/// ((e - 1) mod (q^2 - 1)) + 1 and exponent 0 stays put. Throws
/// InvalidArgument when the field has no quadratic structure.
Polynomial reduce_mod_field(const Polynomial& f);

/// f(X^e) reduced mod X^{q^2} - X. Throws InvalidArgument for e == 0.
Polynomial compose_power(const Polynomial& f, std::uint64_t e);

std::size_t term_count(const Polynomial& f) noexcept;

/// `c*X^e` terms joined by " + " with strictly decreasing exponents; c is
/// the packed base-p coefficient. Exponent 1 prints as `c*X`, exponent 0 as
/// `c`, and the zero polynomial as `0`.
std::string format_polynomial(const Polynomial& f);

/// Parses the format_polynomial grammar (whitespace-insensitive). Terms may
/// come in any order; repeated exponents are summed. Throws ParseError.
Polynomial parse_polynomial(const Field& owner, std::string_view text);

}  // namespace ppoly
