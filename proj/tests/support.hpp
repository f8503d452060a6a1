#pragma once

#include <map>
#include <random>

#include "oracle.hpp"
#include "ppoly/gf.hpp"
#include "ppoly/poly.hpp"

namespace testing_support {

inline oracle::Gf to_oracle(const ppoly::Field& field) {
  oracle::Vec m(field->modulus().begin(), field->modulus().end());
  return {field->p(), m};
}

inline std::map<std::uint64_t, std::uint64_t> terms_of(const ppoly::Polynomial& f) {
  return {f.terms().begin(), f.terms().end()};
}

inline ppoly::Elem random_elem(const ppoly::Field& field, std::mt19937_64& rng) {
  return static_cast<ppoly::Elem>(rng() % field->size());
}

/// Random polynomial of degree <= max_degree, each coefficient uniform.
inline ppoly::Polynomial random_poly(const ppoly::Field& field, std::uint64_t max_degree, std::mt19937_64& rng) {
  ppoly::Polynomial f(field);
  for (std::uint64_t e = 0; e <= max_degree; ++e) f.add_term(e, random_elem(field, rng));
  return f;
}

}  // namespace testing_support
