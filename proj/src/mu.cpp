#include "ppoly/mu.hpp"

#include <algorithm>
#include <numeric>

#include "ppoly/errors.hpp"
#include "ppoly/numeric.hpp"

namespace ppoly {

void require_scannable(const FieldSpec& field, const Limits& limits) {
  if (field.size() > limits.max_scan_size) {
    throw ResourceLimit("field of size " + std::to_string(field.size()) + " exceeds the scan cap of " +
                        std::to_string(limits.max_scan_size));
  }
}

MuGroup::MuGroup(Field field, std::vector<Elem> elements)
    : field_(std::move(field)), q_(field_->q()), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  if (elements_.size() != q_ + 1 || std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end()) {
    throw InternalInconsistency("mu_{q+1} must have exactly q+1 distinct elements");
  }
}

std::ptrdiff_t MuGroup::index_of(Elem x) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), x);
  if (it == elements_.end() || *it != x) return -1;
  return it - elements_.begin();
}

MuGroup enumerate_mu(const Field& field, MuMode mode, const Limits& limits) {
  const std::uint64_t q = field->q();
  const auto e = static_cast<std::int64_t>(q + 1);
  std::vector<Elem> elements;
  elements.reserve(q + 1);
  if (mode == MuMode::Scan) {
    require_scannable(*field, limits);
    for (std::uint64_t x = 1; x < field->size(); ++x) {
      if (field->pow(static_cast<Elem>(x), e) == 1) elements.push_back(static_cast<Elem>(x));
    }
  } else {
    const Elem h = field->pow(field->generator(), static_cast<std::int64_t>(q - 1));
    Elem x = 1;
    for (std::uint64_t i = 0; i <= q; ++i) {
      elements.push_back(x);
      x = field->mul(x, h);
    }
  }
  return MuGroup(field, std::move(elements));
}

bool permutes_mu(std::int64_t r, const Polynomial& a, const MuGroup& mu) {
  if (a.owner() != mu.field()) throw InvalidArgument("polynomial and mu_{q+1} live in different fields");
  const auto& field = *mu.field();
  const auto r_mod = static_cast<std::int64_t>(mod_floor(r, mu.q() + 1));
  const auto frob_minus_one = static_cast<std::int64_t>(mu.q() - 1);
  std::vector<char> seen(mu.size(), 0);
  for (Elem x : mu.elements()) {
    const Elem ax = eval_raw(a, x);
    if (ax == 0) return false;
    const Elem gx = field.mul(field.pow(x, r_mod), field.pow(ax, frob_minus_one));
    const auto idx = mu.index_of(gx);
    if (idx < 0 || seen[static_cast<std::size_t>(idx)]) return false;
    seen[static_cast<std::size_t>(idx)] = 1;
  }
  return true;
}

bool is_permutation_bruteforce(const Polynomial& f, const Limits& limits) {
  const auto& field = *f.owner();
  require_scannable(field, limits);
  std::vector<bool> seen(field.size(), false);
  for (std::uint64_t x = 0; x < field.size(); ++x) {
    const Elem y = eval_raw(f, static_cast<Elem>(x));
    if (seen[y]) return false;
    seen[y] = true;
  }
  return true;
}

Polynomial lemma1_polynomial(std::uint64_t r, const Polynomial& a) {
  const std::uint64_t q = a.owner()->q();
  return reduce_mod_field(shift(substitute_power(a, q - 1), r));
}

bool lemma1_check(std::int64_t r, const Polynomial& a, const MuGroup& mu) {
  if (r <= 0) throw InvalidArgument("lemma1_check needs a positive exponent r");
  const auto q = static_cast<std::int64_t>(mu.q());
  if (std::gcd(r, q - 1) != 1) return false;
  return permutes_mu(r, a, mu);
}

bool lemma1_check(std::int64_t r, const Polynomial& a) { return lemma1_check(r, a, enumerate_mu(a.owner())); }

}  // namespace ppoly
