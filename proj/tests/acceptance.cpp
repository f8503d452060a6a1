// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "ppoly/construct.hpp"
#include "ppoly/errors.hpp"
#include "ppoly/mu.hpp"
#include "ppoly/numeric.hpp"
#include "ppoly/search.hpp"
#include "support.hpp"

namespace {

using namespace ppoly;
using testing_support::random_poly;

struct Outcome {
  bool ok;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> run;
};

// (p, k) with q = p^k
std::pair<std::uint32_t, unsigned> prime_power(std::uint64_t q) {
  const auto f = factorize(q);
  return {static_cast<std::uint32_t>(f.at(0).prime), f.at(0).exponent};
}

Polynomial f2_poly(const Field& field, std::initializer_list<std::uint64_t> exponents) {
  Polynomial f(field);
  for (auto e : exponents) f.add_term(e, 1);
  return f;
}

// Mix of dense random polynomials and sparse ones; the sparse half is where
// the positive instances come from.
Polynomial sample_a(const Field& field, std::uint64_t max_degree, int i, std::mt19937_64& rng) {
  if (i % 2 == 0) return random_poly(field, rng() % (max_degree + 1), rng);
  Polynomial a(field);
  const int terms = 1 + static_cast<int>(rng() % 2);
  for (int j = 0; j < terms; ++j) {
    a.add_term(rng() % (max_degree + 1), 1 + static_cast<Elem>(rng() % (field->size() - 1)));
  }
  if (a.is_zero()) a = Polynomial::constant(field, 1);
  return a;
}

Outcome lemma1_equivalence() {
  std::mt19937_64 rng(20220727);
  std::size_t samples = 0, disagreements = 0, positives = 0;
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9}) {
    const auto [p, k] = prime_power(q);
    const auto field = make_quadratic_field(p, k);
    const auto mu = enumerate_mu(field);
    for (int i = 0; i < 500; ++i) {
      const Polynomial a = sample_a(field, q + 2, i, rng);
      const auto r = static_cast<std::int64_t>(1 + rng() % (2 * q * q));
      const bool criterion = lemma1_check(r, a, mu);
      const bool oracle = is_permutation_bruteforce(lemma1_polynomial(static_cast<std::uint64_t>(r), a));
      ++samples;
      disagreements += criterion != oracle;
      positives += oracle;
    }
  }
  return {disagreements == 0, std::to_string(samples) + " samples, " + std::to_string(positives) + " permutations, " +
                                  std::to_string(disagreements) + " disagreements"};
}

Outcome lemma2_iff() {
  std::mt19937_64 rng(13335);
  std::size_t samples = 0, disagreements = 0, positives = 0;
  for (std::uint64_t q : {2, 3, 4, 5, 8}) {
    const auto [p, k] = prime_power(q);
    const auto field = make_quadratic_field(p, k);
    const auto mu = enumerate_mu(field);
    for (int i = 0; i < 500; ++i) {
      const Polynomial a = sample_a(field, 6, i, rng);
      const auto r = static_cast<std::int64_t>(rng() % (2 * (q + 1) + 1));
      const std::vector<MultiplierSpec> specs{{1 + rng() % 4, 1 + rng() % (q + 1)}};
      const auto out = lemma2_check(r, a, specs, mu);
      ++samples;
      disagreements += !out.agree();
      positives += out.left;
    }
  }
  return {disagreements == 0, std::to_string(samples) + " samples, " + std::to_string(positives) +
                                  " with both sides true, " + std::to_string(disagreements) + " disagreements"};
}

Outcome lemma4_exhaustive() {
  std::size_t checked = 0, failures = 0;
  for (unsigned k = 1; k <= 8; ++k) {
    const auto field = cached_field(2, 2 * k);
    const auto mu = enumerate_mu(field);
    for (unsigned ell = 1; ell <= 8; ++ell) {
      const std::uint64_t big_q = std::uint64_t{1} << ell;
      if (ord2(ell) <= ord2(k)) {
        ++checked;
        failures += !permutes_mu(static_cast<std::int64_t>(big_q + 1), f2_poly(field, {big_q + 1, 1, 0}), mu);
      }
      if (ord2(ell) != ord2(k)) {
        ++checked;
        failures += !permutes_mu(static_cast<std::int64_t>(big_q + 1), f2_poly(field, {big_q, 1, 0}), mu);
      }
    }
  }
  return {failures == 0 && checked > 0,
          std::to_string(checked) + " (k, ell, variant) checks, " + std::to_string(failures) + " failures"};
}

Outcome cor5_end_to_end() {
  const ConstructOptions no_verify{false, {}};
  std::size_t built = 0, failures = 0;
  for (unsigned k : {2u, 4u, 6u}) {
    for (unsigned ell = 1; ell <= 6; ++ell) {
      for (int variant : {1, 2}) {
        if (!lemma4_condition({k, ell, variant})) continue;
        for (std::uint64_t t = 1; t <= 8; ++t) {
          const auto res = cor5(k, ell, variant, 1, t, std::nullopt, no_verify);
          ++built;
          failures += !is_permutation_bruteforce(res.f);
        }
        if ((ell % 2 == 0 && variant == 1) || (ell % 2 == 1 && variant == 2)) {
          const auto res = cor5(k, ell, variant, 2, std::nullopt, std::nullopt, no_verify);
          ++built;
          failures += !is_permutation_bruteforce(res.f);
        }
      }
    }
  }
  return {failures == 0 && built > 0,
          std::to_string(built) + " constructions checked over F_{q^2}, " + std::to_string(failures) + " failures"};
}

Outcome divisibility_parity() {
  const auto field = make_quadratic_field(2, 2);
  const auto mult = multiplier_poly({2, 1}, field);
  std::size_t mismatches = 0, cases = 0;
  for (unsigned ell = 1; ell <= 10; ++ell) {
    const std::uint64_t big_q = std::uint64_t{1} << ell;
    for (int variant : {1, 2}) {
      const auto d = variant == 1 ? f2_poly(field, {big_q + 1, 1, 0}) : f2_poly(field, {big_q, 1, 0});
      bool divides = true;
      try {
        exact_divide(d, mult);
      } catch (const NotDivisible&) {
        divides = false;
      }
      const bool expected = (ell % 2 == 0 && variant == 1) || (ell % 2 == 1 && variant == 2);
      ++cases;
      mismatches += divides != expected;
    }
  }
  return {mismatches == 0, std::to_string(cases) + " cases, " + std::to_string(mismatches) + " mismatches"};
}

// First `count` permutations built from the characteristic-2 seeds over q = 2^k.
std::vector<Polynomial> constructed_permutations(unsigned k, std::size_t count) {
  const ConstructOptions no_verify{false, {}};
  const std::uint64_t q = std::uint64_t{1} << k;
  std::vector<Polynomial> out;
  for (unsigned ell = 1; ell <= 6 && out.size() < count; ++ell) {
    for (int variant : {1, 2}) {
      if (!lemma4_condition({k, ell, variant})) continue;
      const auto seed = lemma4_seed({k, ell, variant}, no_verify);
      std::vector<std::vector<MultiplierSpec>> tuples{{}};
      for (std::uint64_t s = 1; s <= 4; ++s) {
        for (std::uint64_t t = 1; t <= 4; ++t) {
          if (lemma2_condition(s, t, q)) tuples.push_back({{s, t}});
        }
      }
      for (const auto& specs : tuples) {
        std::int64_t w = 0;
        for (const auto& m : specs) w += static_cast<std::int64_t>(m.s * m.t);
        for (bool product : {true, false}) {
          for (auto r : valid_r_below(product ? seed.v + w : seed.v - w, q, 4 * (q + 1))) {
            try {
              auto res = product ? cor3_product(seed, specs, r, no_verify) : cor3_quotient(seed, specs, r, no_verify);
              out.push_back(res.f);
            } catch (const NotDivisible&) {
              break;
            }
            if (out.size() == count) return out;
          }
        }
      }
    }
  }
  return out;
}

Outcome composition_closure() {
  std::size_t checked = 0, failures = 0, bases = 0;
  for (unsigned k : {1u, 2u, 3u}) {
    const auto perms = constructed_permutations(k, 50);
    if (perms.size() < 50) return {false, "only " + std::to_string(perms.size()) + " constructions for k=" + std::to_string(k)};
    const std::uint64_t order = (std::uint64_t{1} << (2 * k)) - 1;
    for (const auto& f : perms) {
      ++bases;
      failures += !is_permutation_bruteforce(f);
      for (std::uint64_t e = 1; e <= 20; ++e) {
        if (std::gcd(e, order) != 1) continue;
        ++checked;
        failures += !is_permutation_bruteforce(compose_power(f, e));
      }
    }
  }
  return {failures == 0, std::to_string(bases) + " base permutations, " + std::to_string(checked) +
                             " compositions, " + std::to_string(failures) + " failures"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome search_determinism() {
  namespace fs = std::filesystem;
  auto config = load_search_config(PPOLY_SOURCE_DIR "/configs/demo.conf");
  const auto first = fs::temp_directory_path() / "ppoly_acceptance_1.jsonl";
  const auto second = fs::temp_directory_path() / "ppoly_acceptance_2.jsonl";
  config.output = first.string();
  run_search(config);
  config.output = second.string();
  run_search(config);
  const std::string a = slurp(first), b = slurp(second);
  fs::remove(first);
  fs::remove(second);
  if (a.empty()) return {false, "empty findings file"};
  if (a != b) return {false, "findings differ between runs"};

  const auto seed = lemma4_seed({2, 2, 1});
  const std::vector<MultiplierSpec> specs{{2, 1}};
  const auto instance = cor3_product(seed, specs, 2);
  if (format_polynomial(instance.b) != "1*X^7 + 1*X^6 + 1*X^5 + 1*X^3 + 1") return {false, "unexpected B"};
  const auto target = canonicalize(instance.f);

  std::istringstream lines(a);
  std::string line;
  std::size_t records = 0, unverified = 0;
  bool found = false;
  while (std::getline(lines, line)) {
    const auto x = parse_record(line);
    ++records;
    unverified += !x.verified;
    if (x.q == 4 && canonicalize(parse_polynomial(seed.field(), x.f)) == target) found = true;
  }
  const bool ok = unverified == 0 && found;
  return {ok, std::to_string(records) + " records, byte-identical, " + std::to_string(unverified) +
                  " unverified, q=4 instance " + (found ? "present" : "MISSING") + " (f = " +
                  format_polynomial(target) + ")"};
}

Outcome field_layer() {
  std::size_t fields = 0, failures = 0;
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (unsigned n = 1; n <= 8; ++n) {
      ++fields;
      failures += !is_irreducible(make_field(p, n)->modulus(), p);
    }
  }
  std::size_t candidates = 0, mismatches = 0;
  for (unsigned n = 1; n <= 6; ++n) {
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
      PrimeFieldPoly f(n + 1, 0);
      f[n] = 1;
      for (unsigned i = 0; i < n; ++i) f[i] = (c >> i) & 1;
      ++candidates;
      const bool expected = oracle::irreducible_by_trial_division(oracle::Vec(f.begin(), f.end()), 2);
      mismatches += is_irreducible(f, 2) != expected;
    }
  }
  return {failures == 0 && mismatches == 0,
          std::to_string(fields) + " fields built, " + std::to_string(failures) + " reducible moduli; " +
              std::to_string(candidates) + " F_2 candidates, " + std::to_string(mismatches) + " mismatches"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "mu criterion agrees with brute force", 60, lemma1_equivalence},
      {2, "multiplier criterion iff (both sides)", 60, lemma2_iff},
      {3, "characteristic-2 seeds permute mu_{q+1}", 10, lemma4_exhaustive},
      {4, "even-k constructions pass the oracle", 120, cor5_end_to_end},
      {5, "divisibility parity by X^2+X+1", 10, divisibility_parity},
      {6, "composition with X^e stays a permutation", 60, composition_closure},
      {7, "search determinism and soundness", 120, search_determinism},
      {8, "field layer irreducibility", 10, field_layer},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = out.ok && in_time;
    failed += !pass;
    std::printf("[%s] AC%d %s: %s (%.2f s, limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                out.detail.c_str(), secs, c.time_limit_s);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
