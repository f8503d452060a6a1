#include "ppoly/poly.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <sstream>
#include <vector>

#include "ppoly/errors.hpp"

namespace ppoly {
namespace {

void require_same_owner(const Polynomial& f, const Polynomial& g) {
  if (f.owner() != g.owner()) throw InvalidArgument("polynomials belong to different fields");
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw InvalidArgument("exponent overflows 64 bits");
  }
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a) throw InvalidArgument("exponent overflows 64 bits");
  return a + b;
}

}  // namespace

Polynomial::Polynomial(Field owner) : owner_(std::move(owner)) {
  if (!owner_) throw InvalidArgument("polynomial without a field");
}

Polynomial::Polynomial(Field owner, Terms terms) : Polynomial(std::move(owner)) {
  for (const auto& [e, c] : terms) {
    if (!owner_->contains(c)) throw InvalidArgument("coefficient " + std::to_string(c) + " outside the field");
    if (c != 0) terms_.emplace(e, c);
  }
}

Polynomial Polynomial::monomial(Field owner, std::uint64_t exponent, Elem coeff) {
  return Polynomial(std::move(owner), Terms{{exponent, coeff}});
}

std::uint64_t Polynomial::degree() const {
  if (terms_.empty()) throw InvalidArgument("the zero polynomial has no degree");
  return terms_.rbegin()->first;
}

Elem Polynomial::leading_coefficient() const {
  if (terms_.empty()) throw InvalidArgument("the zero polynomial has no leading coefficient");
  return terms_.rbegin()->second;
}

Elem Polynomial::coefficient(std::uint64_t exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? 0 : it->second;
}

void Polynomial::add_term(std::uint64_t exponent, Elem c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, c);
  if (inserted) return;
  it->second = owner_->add(it->second, c);
  if (it->second == 0) terms_.erase(it);
}

Polynomial operator+(const Polynomial& f, const Polynomial& g) {
  require_same_owner(f, g);
  Polynomial out = f;
  for (const auto& [e, c] : g.terms()) out.add_term(e, c);
  return out;
}

Polynomial operator-(const Polynomial& f, const Polynomial& g) {
  require_same_owner(f, g);
  Polynomial out = f;
  for (const auto& [e, c] : g.terms()) out.add_term(e, f.owner()->neg(c));
  return out;
}

Polynomial operator*(const Polynomial& f, const Polynomial& g) { return poly_mul(f, g); }

Polynomial poly_mul(const Polynomial& f, const Polynomial& g) {
  require_same_owner(f, g);
  const auto& field = *f.owner();
  Polynomial out(f.owner());
  for (const auto& [ef, cf] : f.terms()) {
    for (const auto& [eg, cg] : g.terms()) out.add_term(checked_add(ef, eg), field.mul(cf, cg));
  }
  return out;
}

Polynomial scale(const Polynomial& f, Elem c) {
  Polynomial out(f.owner());
  for (const auto& [e, coeff] : f.terms()) out.add_term(e, f.owner()->mul(coeff, c));
  return out;
}

Polynomial shift(const Polynomial& f, std::uint64_t by) {
  Polynomial out(f.owner());
  for (const auto& [e, c] : f.terms()) out.add_term(checked_add(e, by), c);
  return out;
}

Polynomial substitute_power(const Polynomial& f, std::uint64_t m) {
  Polynomial out(f.owner());
  for (const auto& [e, c] : f.terms()) out.add_term(checked_mul(e, m), c);
  return out;
}

Elem eval_raw(const Polynomial& f, Elem x) {
  const auto& field = *f.owner();
  if (x == 0) return f.coefficient(0);
  const std::uint64_t order = field.size() - 1;
  Elem acc = 0;
  for (const auto& [e, c] : f.terms()) {
    const auto reduced = static_cast<std::int64_t>(e % order);
    acc = field.add(acc, field.mul(c, field.pow(x, reduced)));
  }
  return acc;
}

FieldElement eval(const Polynomial& f, const FieldElement& x) {
  if (x.owner() != f.owner()) throw InvalidArgument("evaluation point belongs to a different field");
  return {f.owner(), eval_raw(f, x.value())};
}

Polynomial multiplier_poly(const MultiplierSpec& spec, const Field& owner) {
  if (spec.s == 0 || spec.t == 0) throw InvalidArgument("multiplier needs s >= 1 and t >= 1");
  Polynomial out(owner);
  for (std::uint64_t j = 0; j <= spec.s; ++j) out.add_term(checked_mul(j, spec.t), 1);
  return out;
}

Polynomial multiplier_product(std::span<const MultiplierSpec> specs, const Field& owner) {
  Polynomial out = Polynomial::constant(owner, 1);
  for (const auto& spec : specs) out = poly_mul(out, multiplier_poly(spec, owner));
  return out;
}

Polynomial exact_divide(const Polynomial& num, const Polynomial& den) {
  require_same_owner(num, den);
  if (den.is_zero()) throw DivisionByZero("polynomial division by zero");
  const auto& field = *num.owner();
  const std::uint64_t dd = den.degree();
  const Elem lead_inv = field.inv(den.leading_coefficient());

  Polynomial rem = num;
  Polynomial quot(num.owner());
  while (!rem.is_zero() && rem.degree() >= dd) {
    const std::uint64_t by = rem.degree() - dd;
    const Elem c = field.mul(rem.leading_coefficient(), lead_inv);
    quot.add_term(by, c);
    for (const auto& [e, dc] : den.terms()) rem.add_term(e + by, field.neg(field.mul(c, dc)));
  }
  if (!rem.is_zero()) {
    throw NotDivisible(format_polynomial(num) + " is not divisible by " + format_polynomial(den));
  }
  if (poly_mul(den, quot) != num) throw InternalInconsistency("exact division failed re-multiplication check");
  return quot;
}

Polynomial reduce_mod_field(const Polynomial& f) {
  const std::uint64_t q2 = f.owner()->size();
  if (!f.owner()->is_quadratic()) throw InvalidArgument("reduction mod X^{q^2} - X needs a field of even degree");
  const std::uint64_t period = q2 - 1;
  Polynomial out(f.owner());
  for (const auto& [e, c] : f.terms()) out.add_term(e == 0 ? 0 : (e - 1) % period + 1, c);
  return out;
}

Polynomial compose_power(const Polynomial& f, std::uint64_t e) {
  if (e == 0) throw InvalidArgument("composition exponent must be positive");
  if (!f.owner()->is_quadratic()) throw InvalidArgument("reduction mod X^{q^2} - X needs a field of even degree");
  const std::uint64_t period = f.owner()->size() - 1;
  Polynomial out(f.owner());
  for (const auto& [exp, c] : f.terms()) {
    if (exp == 0) {
      out.add_term(0, c);
      continue;
    }
    // For x > 0, ((x - 1) mod P) + 1 is x mod P with 0 replaced by P.
    const std::uint64_t m = (exp % period) * (e % period) % period;
    out.add_term(m == 0 ? period : m, c);
  }
  return out;
}

std::size_t term_count(const Polynomial& f) noexcept { return f.terms().size(); }

std::string format_polynomial(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << it->second;
    if (it->first >= 1) os << "*X";
    if (it->first >= 2) os << "^" << it->first;
  }
  return os.str();
}

namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : text_(text) {}

  template <class Sink>
  void parse(Sink&& sink) {
    skip_ws();
    if (at_end()) fail("empty polynomial");
    while (true) {
      parse_term(sink);
      skip_ws();
      if (at_end()) return;
      expect('+');
    }
  }

 private:
  template <class Sink>
  void parse_term(Sink& sink) {
    skip_ws();
    const std::uint64_t c = number("coefficient");
    skip_ws();
    if (at_end() || peek() != '*') {
      sink(0, c);
      return;
    }
    ++pos_;
    skip_ws();
    expect('X');
    skip_ws();
    if (!at_end() && peek() == '^') {
      ++pos_;
      skip_ws();
      sink(number("exponent"), c);
    } else {
      sink(1, c);
    }
  }

  std::uint64_t number(const char* what) {
    std::uint64_t v = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr == begin) fail(std::string("expected ") + what);
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  void expect(char ch) {
    skip_ws();
    if (at_end() || peek() != ch) fail(std::string("expected '") + ch + "'");
    ++pos_;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const Field& owner, std::string_view text) {
  Polynomial out(owner);
  PolyParser(text).parse([&](std::uint64_t e, std::uint64_t c) {
    if (c >= owner->size()) throw ParseError("coefficient " + std::to_string(c) + " outside the field");
    out.add_term(e, static_cast<Elem>(c));
  });
  return out;
}

}  // namespace ppoly
