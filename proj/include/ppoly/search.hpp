#pragma once

// Sweeps seed families x multiplier tuples x exponents, keeps the
// permutation polynomials with few terms, and records them as findings.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppoly/construct.hpp"

namespace ppoly {

enum class RPolicy { SmallestValid, AllBelow };

struct SearchConfig {
  std::vector<unsigned> k_values;
  std::vector<unsigned> ell_values;
  std::vector<int> variants;
  std::vector<Branch> branches;  // Cor31 and/or Cor32
  unsigned max_m = 1;
  std::uint64_t max_s = 2;
  std::uint64_t max_t = 1;
  RPolicy r_policy = RPolicy::SmallestValid;
  std::uint64_t r_bound = 0;  // AllBelow only: r < r_bound
  std::vector<std::uint64_t> compose_e;
  std::size_t sparsity_threshold = 0;
  bool verify = true;
  std::string output;
};

/// Every problem with the config; empty when valid.
std::vector<std::string> validate_search_config(const SearchConfig& config);

/// Parses `key = value` lines (`#` starts a comment). Lists are comma
/// separated and may use `a..b` ranges. Throws ValidationError listing every
/// unknown key, malformed value and failed check at once.
SearchConfig parse_search_config(std::string_view text);
SearchConfig load_search_config(const std::string& path);

/// One permutation polynomial produced by the sweep.
struct Finding {
  std::uint32_t p = 2;
  unsigned k = 0;
  std::uint64_t q = 0;
  std::uint64_t r = 0;
  std::optional<std::uint64_t> e;
  std::string branch;
  int variant = 0;
  unsigned ell = 0;
  std::vector<MultiplierSpec> multipliers;
  std::string b;
  std::string f;
  std::size_t terms_b = 0;
  std::size_t terms_f = 0;
  bool verified = false;
  std::string seed;

  friend bool operator==(const Finding&, const Finding&) = default;
};

/// One JSON object on a single line, keys in the fixed record order.
std::string to_record(const Finding& finding);
/// Throws ParseError (tagged with `line`) on malformed input or a key set
/// that differs from the record schema.
Finding parse_record(std::string_view text, std::size_t line = 0);

/// Reduced, then scaled so the highest-exponent coefficient is 1. Throws
/// InvalidArgument for the zero polynomial.
Polynomial canonicalize(const Polynomial& f);

struct SearchSummary {
  std::uint64_t units = 0;           ///< (k, ell, variant, branch) combinations
  std::uint64_t seeds_skipped = 0;   ///< units whose seed condition fails
  std::uint64_t tuples = 0;          ///< (unit, multiplier tuple) combinations tried
  std::uint64_t tuples_skipped = 0;  ///< tuples failing a precondition
  std::uint64_t candidates = 0;      ///< polynomials constructed (per r and e)
  std::uint64_t duplicates = 0;
  std::uint64_t above_threshold = 0;
  std::uint64_t emitted = 0;
};

struct SearchOptions {
  unsigned threads = 1;
  Limits limits{};
  /// Progress text goes here when set; never findings.
  std::ostream* progress = nullptr;
};

/// Runs the sweep in a fixed enumeration order, writing each emitted finding
/// to config.output (if set) and passing it to sink (if set). Throws
/// ValidationError, IoError for an unwritable output, ResourceLimit when
/// verification would exceed the scan cap.
SearchSummary run_search(const SearchConfig& config, const SearchOptions& options = {},
                         const std::function<void(const Finding&)>& sink = {});

struct ReportRow {
  std::uint64_t q;
  std::string branch;
  std::size_t terms_f;
  std::size_t count;
};

struct FindingsReport {
  std::size_t total = 0;
  std::vector<ReportRow> rows;              ///< sorted by (q, branch, terms_f)
  std::map<std::uint64_t, Finding> sparsest;  ///< first minimal-terms_f finding per q

  std::string render() const;
};

FindingsReport summarize(std::istream& in);
FindingsReport summarize_file(const std::string& path);

}  // namespace ppoly
