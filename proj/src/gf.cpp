#include "ppoly/gf.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <utility>

#include "ppoly/errors.hpp"
#include "ppoly/numeric.hpp"

namespace ppoly {
namespace {

// Arithmetic on dense polynomials over F_p. Coefficients are kept reduced
// and trailing zeros are trimmed, so the zero polynomial is empty.
class PrimeRing {
 public:
  explicit PrimeRing(std::uint32_t p) : p_(p) {}

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>((std::uint64_t{a} + b) % p_);
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>((std::uint64_t{a} + p_ - b) % p_);
  }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(std::uint64_t{a} * b % p_);
  }
  std::uint32_t inv(std::uint32_t a) const {
    // a^(p-2) by Fermat
    std::uint64_t result = 1, base = a, e = p_ - 2;
    while (e > 0) {
      if (e & 1) result = result * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
  }

  static void trim(PrimeFieldPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
  }

  PrimeFieldPoly sub(PrimeFieldPoly a, const PrimeFieldPoly& b) const {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = sub(a[i], b[i]);
    trim(a);
    return a;
  }

  PrimeFieldPoly mul(const PrimeFieldPoly& a, const PrimeFieldPoly& b) const {
    if (a.empty() || b.empty()) return {};
    PrimeFieldPoly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = add(out[i + j], mul(a[i], b[j]));
    }
    trim(out);
    return out;
  }

  // Quotient and remainder; m must be nonzero.
  std::pair<PrimeFieldPoly, PrimeFieldPoly> divmod(PrimeFieldPoly a, const PrimeFieldPoly& m) const {
    const std::size_t dm = m.size() - 1;
    const std::uint32_t lead_inv = inv(m.back());
    trim(a);
    if (a.size() < m.size()) return {{}, a};
    PrimeFieldPoly quot(a.size() - dm, 0);
    for (std::size_t d = a.size(); d-- > dm;) {
      const std::uint32_t c = mul(a[d], lead_inv);
      if (c == 0) continue;
      quot[d - dm] = c;
      for (std::size_t i = 0; i <= dm; ++i) a[d - dm + i] = sub(a[d - dm + i], mul(c, m[i]));
    }
    a.resize(dm);
    trim(a);
    trim(quot);
    return {quot, a};
  }

  PrimeFieldPoly mod(const PrimeFieldPoly& a, const PrimeFieldPoly& m) const { return divmod(a, m).second; }

  PrimeFieldPoly mulmod(const PrimeFieldPoly& a, const PrimeFieldPoly& b, const PrimeFieldPoly& m) const {
    return mod(mul(a, b), m);
  }

  PrimeFieldPoly powmod(PrimeFieldPoly base, std::uint64_t e, const PrimeFieldPoly& m) const {
    PrimeFieldPoly result = mod({1}, m);
    base = mod(base, m);
    while (e > 0) {
      if (e & 1) result = mulmod(result, base, m);
      base = mulmod(base, base, m);
      e >>= 1;
    }
    return result;
  }

  PrimeFieldPoly gcd(PrimeFieldPoly a, PrimeFieldPoly b) const {
    trim(a);
    trim(b);
    while (!b.empty()) {
      auto r = mod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  // s with s*a == 1 mod m, or empty when gcd(a, m) != 1.
  PrimeFieldPoly inverse_mod(const PrimeFieldPoly& a, const PrimeFieldPoly& m) const {
    PrimeFieldPoly r0 = m, r1 = mod(a, m);
    PrimeFieldPoly s0 = {}, s1 = {1};
    while (!r1.empty()) {
      auto [quot, rem] = divmod(r0, r1);
      auto s2 = sub(s0, mul(quot, s1));
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    if (r0.size() != 1) return {};
    const std::uint32_t c = inv(r0[0]);
    for (auto& x : s0) x = mul(x, c);
    return mod(s0, m);
  }

 private:
  std::uint32_t p_;
};

}  // namespace

bool is_irreducible(const PrimeFieldPoly& f_in, std::uint32_t p) {
  if (!is_prime(p)) throw InvalidArgument("characteristic " + std::to_string(p) + " is not prime");
  for (auto c : f_in) {
    if (c >= p) throw InvalidArgument("coefficient not reduced mod p");
  }
  PrimeFieldPoly f = f_in;
  PrimeRing::trim(f);
  if (f.size() < 2) throw InvalidArgument("irreducibility needs a polynomial of degree >= 1");

  const PrimeRing ring(p);
  const std::uint32_t lead_inv = ring.inv(f.back());
  for (auto& c : f) c = ring.mul(c, lead_inv);

  const auto n = static_cast<unsigned>(f.size() - 1);
  const PrimeFieldPoly x = ring.mod({0, 1}, f);

  // frob[j] = X^(p^j) mod f
  std::vector<PrimeFieldPoly> frob(n + 1);
  frob[0] = x;
  for (unsigned j = 1; j <= n; ++j) frob[j] = ring.powmod(frob[j - 1], p, f);
  if (frob[n] != x) return false;

  for (auto l : prime_divisors(n)) {
    const auto g = ring.gcd(ring.sub(frob[n / l], x), f);
    if (g.size() != 1) return false;
  }
  return true;
}

std::string format_prime_poly(const PrimeFieldPoly& f) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t d = f.size(); d-- > 0;) {
    if (f[d] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (d == 0 || f[d] != 1) os << f[d];
    if (d > 0) {
      os << "X";
      if (d > 1) os << "^" << d;
    }
  }
  if (first) os << "0";
  return os.str();
}

// ---------------------------------------------------------------------------
// FieldSpec

std::shared_ptr<const FieldSpec> FieldSpec::from_modulus(std::uint32_t p, PrimeFieldPoly modulus) {
  PrimeRing::trim(modulus);
  if (modulus.size() < 2 || modulus.back() != 1) {
    throw InvalidArgument("field modulus must be monic of degree >= 1");
  }
  if (!is_irreducible(modulus, p)) throw InvalidArgument("field modulus " + format_prime_poly(modulus) + " is reducible");
  return std::shared_ptr<const FieldSpec>(new FieldSpec(p, std::move(modulus)));
}

FieldSpec::FieldSpec(std::uint32_t p, PrimeFieldPoly modulus)
    : p_(p), n_(static_cast<unsigned>(modulus.size() - 1)), modulus_(std::move(modulus)) {
  if (n_ > 32) throw InvalidArgument("extension degree above 32 is not supported");
  size_ = 1;
  for (unsigned i = 0; i < n_; ++i) {
    place_.push_back(size_);
    size_ *= p_;
    if (size_ > (std::uint64_t{1} << 32)) throw InvalidArgument("fields with p^n > 2^32 are not supported");
  }
  if (n_ % 2 == 0) k_ = n_ / 2;
  if (p_ == 2) {
    for (unsigned i = 0; i <= n_; ++i) {
      if (modulus_[i]) modulus_bits_ |= std::uint64_t{1} << i;
    }
  }
  find_generator();
  if (size_ <= kLogTableMaxSize) build_tables();
}

std::uint64_t FieldSpec::q() const {
  if (!k_) throw InvalidArgument("field of odd degree " + std::to_string(n_) + " has no quadratic structure");
  return place_.empty() ? 1 : checked_pow(p_, *k_);
}

std::vector<std::uint32_t> FieldSpec::coordinates(Elem a) const {
  std::vector<std::uint32_t> out(n_);
  std::uint64_t v = a;
  for (unsigned i = 0; i < n_; ++i) {
    out[i] = static_cast<std::uint32_t>(v % p_);
    v /= p_;
  }
  return out;
}

Elem FieldSpec::from_coordinates(std::span<const std::uint32_t> coords) const {
  if (coords.size() > n_) throw InvalidArgument("too many coordinates for field of degree " + std::to_string(n_));
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] >= p_) throw InvalidArgument("coordinate not reduced mod p");
    v += coords[i] * place_[i];
  }
  return static_cast<Elem>(v);
}

Elem FieldSpec::add(Elem a, Elem b) const {
  if (p_ == 2) return a ^ b;
  std::uint64_t va = a, vb = b, out = 0;
  for (unsigned i = 0; i < n_; ++i) {
    out += ((va % p_ + vb % p_) % p_) * place_[i];
    va /= p_;
    vb /= p_;
  }
  return static_cast<Elem>(out);
}

Elem FieldSpec::neg(Elem a) const {
  if (p_ == 2) return a;
  std::uint64_t va = a, out = 0;
  for (unsigned i = 0; i < n_; ++i) {
    out += ((p_ - va % p_) % p_) * place_[i];
    va /= p_;
  }
  return static_cast<Elem>(out);
}

Elem FieldSpec::sub(Elem a, Elem b) const { return add(a, neg(b)); }

Elem FieldSpec::mul_reference(Elem a, Elem b) const {
  if (p_ == 2) {
    std::uint64_t prod = 0;
    for (std::uint64_t bb = b, shift = 0; bb != 0; bb >>= 1, ++shift) {
      if (bb & 1) prod ^= std::uint64_t{a} << shift;
    }
    for (unsigned d = 2 * n_; d-- > n_;) {
      if ((prod >> d) & 1) prod ^= modulus_bits_ << (d - n_);
    }
    return static_cast<Elem>(prod);
  }
  std::array<std::uint64_t, 64> prod{};
  const auto ca = coordinates(a);
  const auto cb = coordinates(b);
  for (unsigned i = 0; i < n_; ++i) {
    if (ca[i] == 0) continue;
    for (unsigned j = 0; j < n_; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{ca[i]} * cb[j]) % p_;
  }
  for (unsigned d = 2 * n_ - 1; d-- > n_;) {
    const std::uint64_t c = prod[d];
    if (c == 0) continue;
    // X^n = -(m_0 + ... + m_{n-1} X^{n-1})
    for (unsigned i = 0; i < n_; ++i) {
      prod[d - n_ + i] = (prod[d - n_ + i] + (p_ - modulus_[i]) % p_ * c) % p_;
    }
    prod[d] = 0;
  }
  std::uint64_t out = 0;
  for (unsigned i = 0; i < n_; ++i) out += prod[i] * place_[i];
  return static_cast<Elem>(out);
}

Elem FieldSpec::inv_reference(Elem a) const {
  if (a == 0) throw DivisionByZero("zero has no multiplicative inverse");
  const PrimeRing ring(p_);
  PrimeFieldPoly ca = coordinates(a);
  PrimeRing::trim(ca);
  const auto s = ring.inverse_mod(ca, modulus_);
  if (s.empty()) throw InternalInconsistency("element not invertible modulo an irreducible modulus");
  return from_coordinates(s);
}

Elem FieldSpec::pow_reference(Elem a, std::uint64_t e) const {
  Elem result = 1;
  Elem base = a;
  while (e > 0) {
    if (e & 1) result = mul_reference(result, base);
    base = mul_reference(base, base);
    e >>= 1;
  }
  return result;
}

Elem FieldSpec::mul(Elem a, Elem b) const {
  if (exp_.empty()) return mul_reference(a, b);
  if (a == 0 || b == 0) return 0;
  const std::uint64_t order = size_ - 1;
  std::uint64_t l = std::uint64_t{log_[a]} + log_[b];
  if (l >= order) l -= order;
  return exp_[l];
}

Elem FieldSpec::inv(Elem a) const {
  if (a == 0) throw DivisionByZero("zero has no multiplicative inverse");
  if (exp_.empty()) return inv_reference(a);
  const std::uint64_t order = size_ - 1;
  return exp_[(order - log_[a]) % order];
}

Elem FieldSpec::pow(Elem a, std::int64_t e) const {
  if (a == 0) {
    if (e < 0) throw DivisionByZero("zero raised to a negative power");
    return e == 0 ? 1 : 0;
  }
  const std::uint64_t order = size_ - 1;
  const std::uint64_t em = mod_floor(e, order);
  if (exp_.empty()) return pow_reference(a, em);
  return exp_[std::uint64_t{log_[a]} * em % order];
}

void FieldSpec::find_generator() {
  const std::uint64_t order = size_ - 1;
  const auto primes = prime_divisors(order);
  for (std::uint64_t c = 1; c < size_; ++c) {
    const auto cand = static_cast<Elem>(c);
    const bool primitive = std::all_of(primes.begin(), primes.end(),
                                       [&](std::uint64_t l) { return pow_reference(cand, order / l) != 1; });
    if (primitive) {
      generator_ = cand;
      return;
    }
  }
  throw InternalInconsistency("no primitive element found; modulus is not irreducible");
}

void FieldSpec::build_tables() {
  const std::uint64_t order = size_ - 1;
  log_.assign(size_, 0);
  exp_.assign(order, 0);
  Elem x = 1;
  for (std::uint64_t i = 0; i < order; ++i) {
    exp_[i] = x;
    log_[x] = static_cast<std::uint32_t>(i);
    x = mul_reference(x, generator_);
  }
}

// ---------------------------------------------------------------------------

Field make_field(std::uint32_t p, unsigned n) {
  if (!is_prime(p)) throw InvalidArgument("characteristic " + std::to_string(p) + " is not prime");
  if (n == 0) throw InvalidArgument("extension degree must be at least 1");
  if (n > 32 || checked_pow(p, n) > (std::uint64_t{1} << 32)) {
    throw InvalidArgument("fields with p^n > 2^32 are not supported");
  }
  const std::uint64_t count = checked_pow(p, n);
  PrimeFieldPoly cand(n + 1, 0);
  cand[n] = 1;
  for (std::uint64_t c = 0; c < count; ++c) {
    std::uint64_t v = c;
    for (unsigned i = 0; i < n; ++i) {
      cand[i] = static_cast<std::uint32_t>(v % p);
      v /= p;
    }
    if (is_irreducible(cand, p)) return FieldSpec::from_modulus(p, cand);
  }
  throw InternalInconsistency("no irreducible polynomial of degree " + std::to_string(n) + " found");
}

Field cached_field(std::uint32_t p, unsigned n) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, unsigned>, Field> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({p, n}); it != cache.end()) return it->second;
  }
  Field field = make_field(p, n);
  std::lock_guard lock(mutex);
  return cache.emplace(std::pair{p, n}, std::move(field)).first->second;
}

// ---------------------------------------------------------------------------
// FieldElement

namespace {

const Field& common_owner(const FieldElement& a, const FieldElement& b) {
  if (a.owner() != b.owner()) throw InvalidArgument("field elements belong to different fields");
  return a.owner();
}

}  // namespace

FieldElement::FieldElement(Field owner, Elem value) : owner_(std::move(owner)), value_(value) {
  if (!owner_) throw InvalidArgument("field element without a field");
  if (!owner_->contains(value_)) throw InvalidArgument("packed value " + std::to_string(value_) + " outside the field");
}

FieldElement FieldElement::from_coordinates(Field owner, std::span<const std::uint32_t> coords) {
  const Elem v = owner->from_coordinates(coords);
  return {std::move(owner), v};
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  const auto& f = common_owner(a, b);
  return {f, f->add(a.value_, b.value_)};
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  const auto& f = common_owner(a, b);
  return {f, f->sub(a.value_, b.value_)};
}

FieldElement operator-(const FieldElement& a) { return {a.owner_, a.owner_->neg(a.value_)}; }

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  const auto& f = common_owner(a, b);
  return {f, f->mul(a.value_, b.value_)};
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  const auto& f = common_owner(a, b);
  return {f, f->mul(a.value_, f->inv(b.value_))};
}

FieldElement fe_mul(const FieldElement& a, const FieldElement& b) { return a * b; }

FieldElement fe_inv(const FieldElement& a) { return {a.owner(), a.owner()->inv(a.value())}; }

FieldElement fe_pow(const FieldElement& a, std::int64_t e) { return {a.owner(), a.owner()->pow(a.value(), e)}; }

std::ostream& operator<<(std::ostream& os, const FieldElement& a) { return os << a.value(); }

}  // namespace ppoly
