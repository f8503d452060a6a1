#include "ppoly/construct.hpp"

#include <array>
#include <numeric>
#include <sstream>

#include "ppoly/errors.hpp"
#include "ppoly/numeric.hpp"

namespace ppoly {

std::string to_string(SeedProvenance p) {
  switch (p) {
    case SeedProvenance::Lemma4Variant1:
      return "lemma4-variant-1";
    case SeedProvenance::Lemma4Variant2:
      return "lemma4-variant-2";
    case SeedProvenance::UserSupplied:
      return "user-supplied";
  }
  return "unknown";
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::Cor31:
      return "cor3.1";
    case Branch::Cor32:
      return "cor3.2";
    case Branch::Cor51:
      return "cor5.1";
    case Branch::Cor52:
      return "cor5.2";
  }
  return "unknown";
}

SeedPermutation make_seed(std::int64_t v, Polynomial d, const MuGroup& mu) {
  if (!permutes_mu(v, d, mu)) {
    throw PreconditionFailed("seed X^" + std::to_string(v) + " * (" + format_polynomial(d) +
                             ")^(q-1) does not permute mu_{q+1}");
  }
  return {v, std::move(d), SeedProvenance::UserSupplied};
}

bool lemma4_condition(const Lemma4Params& params) {
  const unsigned ol = ord2(params.ell);
  const unsigned ok = ord2(params.k);
  switch (params.variant) {
    case 1:
      return ol <= ok;
    case 2:
      return ol != ok;
    default:
      throw InvalidArgument("seed variant must be 1 or 2, got " + std::to_string(params.variant));
  }
}

SeedPermutation lemma4_seed(const Lemma4Params& params, const ConstructOptions& options) {
  if (params.k == 0 || params.ell == 0) throw InvalidArgument("k and ell must be positive");
  if (params.k > 16) throw InvalidArgument("k above 16 would need a field larger than 2^32");
  if (params.ell > 62) throw InvalidArgument("ell above 62 overflows the exponent range");
  if (!lemma4_condition(params)) {
    std::ostringstream msg;
    msg << "variant " << params.variant << " requires ord2(ell) " << (params.variant == 1 ? "<=" : "!=")
        << " ord2(k), but ord2(" << params.ell << ") = " << ord2(params.ell) << " and ord2(" << params.k
        << ") = " << ord2(params.k);
    throw PreconditionFailed(msg.str());
  }

  const Field field = cached_field(2, 2 * params.k);
  const std::uint64_t big_q = params.big_q();
  Polynomial d(field);
  d.add_term(params.variant == 1 ? big_q + 1 : big_q, 1);
  d.add_term(1, 1);
  d.add_term(0, 1);
  SeedPermutation seed{static_cast<std::int64_t>(big_q + 1), std::move(d),
                       params.variant == 1 ? SeedProvenance::Lemma4Variant1 : SeedProvenance::Lemma4Variant2};

  if (options.verify && field->size() <= options.limits.max_scan_size) {
    if (!permutes_mu(seed.v, seed.d, enumerate_mu(field))) {
      throw InternalInconsistency("seed for k=" + std::to_string(params.k) + ", ell=" + std::to_string(params.ell) +
                                  " does not permute mu_{q+1}");
    }
  }
  return seed;
}

bool lemma2_condition(std::uint64_t s, std::uint64_t t, std::uint64_t q) {
  if (std::gcd(s + 1, q) != 1) return false;
  const std::uint64_t cofactor = (q + 1) / std::gcd(t, q + 1);
  return std::gcd(cofactor, s + 1) == 1;
}

namespace {

std::int64_t multiplier_weight(std::span<const MultiplierSpec> specs) {
  std::int64_t total = 0;
  for (const auto& spec : specs) total += static_cast<std::int64_t>(spec.s * spec.t);
  return total;
}

}  // namespace

Lemma2Outcome lemma2_check(std::int64_t r, const Polynomial& a, std::span<const MultiplierSpec> specs,
                           const MuGroup& mu) {
  const Polynomial b = poly_mul(a, multiplier_product(specs, a.owner()));
  Lemma2Outcome out{};
  out.left = permutes_mu(r, b, mu);
  bool conditions = true;
  for (const auto& spec : specs) conditions = conditions && lemma2_condition(spec.s, spec.t, mu.q());
  out.right = conditions && permutes_mu(r - multiplier_weight(specs), a, mu);
  return out;
}

std::uint64_t smallest_valid_r(std::int64_t residue, std::uint64_t q) {
  const std::uint64_t start = mod_floor(residue, q + 1);
  std::uint64_t r = start == 0 ? q + 1 : start;
  for (std::uint64_t i = 0; i < (q - 1) * (q + 1) + 1; ++i, r += q + 1) {
    if (std::gcd(r, q - 1) == 1) return r;
  }
  throw PreconditionFailed("no positive r = " + std::to_string(start) + " (mod " + std::to_string(q + 1) +
                           ") has gcd(r, q-1) = 1");
}

std::vector<std::uint64_t> valid_r_below(std::int64_t residue, std::uint64_t q, std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  const std::uint64_t start = mod_floor(residue, q + 1);
  for (std::uint64_t r = start == 0 ? q + 1 : start; r < bound; r += q + 1) {
    if (std::gcd(r, q - 1) == 1) out.push_back(r);
  }
  return out;
}

namespace {

void check_common(const SeedPermutation& seed, std::span<const MultiplierSpec> specs, std::uint64_t r,
                  std::int64_t target) {
  const std::uint64_t q = seed.field()->q();
  if (r == 0) throw PreconditionFailed("r must be a positive integer");
  for (const auto& spec : specs) {
    if (!lemma2_condition(spec.s, spec.t, q)) {
      std::ostringstream msg;
      msg << "multiplier (s=" << spec.s << ", t=" << spec.t << ") violates gcd(s+1, q) = 1 and "
          << "gcd((q+1)/gcd(t, q+1), s+1) = 1 for q = " << q;
      throw PreconditionFailed(msg.str());
    }
  }
  if (std::gcd(r, q - 1) != 1) {
    throw PreconditionFailed("gcd(r, q-1) = 1 fails: gcd(" + std::to_string(r) + ", " + std::to_string(q - 1) +
                             ") = " + std::to_string(std::gcd(r, q - 1)));
  }
  const std::uint64_t want = mod_floor(target, q + 1);
  if (r % (q + 1) != want) {
    throw PreconditionFailed("congruence fails: r = " + std::to_string(r) + " is " + std::to_string(r % (q + 1)) +
                             " mod " + std::to_string(q + 1) + ", expected " + std::to_string(want));
  }
}

ConstructionResult finish(const SeedPermutation& seed, std::span<const MultiplierSpec> specs, std::uint64_t r,
                          Polynomial b, Branch branch, const ConstructOptions& options) {
  Polynomial f = lemma1_polynomial(r, b);
  ConstructionResult out{r, std::move(b), std::move(f), branch, seed.v, seed.d, seed.provenance,
                         std::vector<MultiplierSpec>(specs.begin(), specs.end()), std::nullopt};
  if (options.verify && seed.field()->size() <= options.limits.max_scan_size) {
    out.verified = is_permutation_bruteforce(out.f, options.limits);
    if (!*out.verified) {
      throw InternalInconsistency(to_string(branch) + " result " + format_polynomial(out.f) +
                                  " is not a permutation");
    }
  }
  return out;
}

}  // namespace

ConstructionResult cor3_product(const SeedPermutation& seed, std::span<const MultiplierSpec> specs, std::uint64_t r,
                                const ConstructOptions& options) {
  check_common(seed, specs, r, seed.v + multiplier_weight(specs));
  Polynomial b = poly_mul(seed.d, multiplier_product(specs, seed.field()));
  return finish(seed, specs, r, std::move(b), Branch::Cor31, options);
}

ConstructionResult cor3_quotient(const SeedPermutation& seed, std::span<const MultiplierSpec> specs,
                                 std::uint64_t r, const ConstructOptions& options) {
  check_common(seed, specs, r, seed.v - multiplier_weight(specs));
  Polynomial b = exact_divide(seed.d, multiplier_product(specs, seed.field()));
  return finish(seed, specs, r, std::move(b), Branch::Cor32, options);
}

ConstructionResult cor5(unsigned k, unsigned ell, int variant, int branch, std::optional<std::uint64_t> t,
                        std::optional<std::uint64_t> r, const ConstructOptions& options) {
  if (k == 0 || k % 2 != 0) throw PreconditionFailed("k must be a positive even integer, got " + std::to_string(k));
  if (branch == 2) {
    if (t) throw InvalidArgument("branch 2 takes no t");
    const bool parity_ok = (ell % 2 == 0 && variant == 1) || (ell % 2 == 1 && variant == 2);
    if (!parity_ok) {
      throw PreconditionFailed("branch 2 needs (ell even and variant 1) or (ell odd and variant 2), got ell = " +
                               std::to_string(ell) + ", variant " + std::to_string(variant));
    }
  } else if (branch != 1) {
    throw InvalidArgument("branch must be 1 or 2, got " + std::to_string(branch));
  }
  const Lemma4Params params{k, ell, variant};
  const SeedPermutation seed = lemma4_seed(params, options);
  const std::uint64_t q = params.q();
  const std::uint64_t big_q = params.big_q();

  if (branch == 1) {
    if (!t || *t == 0) throw PreconditionFailed("branch 1 needs a positive t");
    // 2^k = 1 (mod 3) for even k, so 3 never divides q+1.
    if (!lemma2_condition(2, *t, q)) {
      throw InternalInconsistency("multiplier (2, " + std::to_string(*t) + ") fails its condition with k even");
    }
    const std::array<MultiplierSpec, 1> specs{MultiplierSpec{2, *t}};
    const std::uint64_t chosen =
        r ? *r : smallest_valid_r(static_cast<std::int64_t>((big_q + 1 + 2 * *t) % (q + 1)), q);
    auto out = cor3_product(seed, specs, chosen, options);
    out.branch = Branch::Cor51;
    return out;
  }
  if (branch == 2) {
    const std::array<MultiplierSpec, 1> specs{MultiplierSpec{2, 1}};
    const std::uint64_t chosen = r ? *r : smallest_valid_r(static_cast<std::int64_t>((big_q - 1) % (q + 1)), q);
    auto out = cor3_quotient(seed, specs, chosen, options);
    out.branch = Branch::Cor52;
    return out;
  }
  throw InvalidArgument("branch must be 1 or 2, got " + std::to_string(branch));
}

}  // namespace ppoly
