#include "ppoly/search.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <future>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "ppoly/errors.hpp"

namespace ppoly {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<std::uint64_t> parse_uint(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// "1, 3..5" -> {1, 3, 4, 5}
std::optional<std::vector<std::uint64_t>> parse_uint_list(std::string_view s) {
  std::vector<std::uint64_t> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      auto v = parse_uint(item);
      if (!v) return std::nullopt;
      out.push_back(*v);
      continue;
    }
    auto lo = parse_uint(trim(std::string_view(item).substr(0, dots)));
    auto hi = parse_uint(trim(std::string_view(item).substr(dots + 2)));
    if (!lo || !hi || *lo > *hi || *hi - *lo > 100000) return std::nullopt;
    for (auto v = *lo; v <= *hi; ++v) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <class T>
std::vector<T> narrow(const std::vector<std::uint64_t>& values) {
  std::vector<T> out;
  for (auto v : values) out.push_back(static_cast<T>(v));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

std::vector<std::string> validate_search_config(const SearchConfig& c) {
  std::vector<std::string> problems;
  if (c.k_values.empty()) problems.emplace_back("k: must list at least one value");
  for (auto k : c.k_values) {
    if (k == 0 || k > 16) problems.push_back("k: " + std::to_string(k) + " outside 1..16");
  }
  if (c.ell_values.empty()) problems.emplace_back("ell: must list at least one value");
  for (auto ell : c.ell_values) {
    if (ell == 0 || ell > 62) problems.push_back("ell: " + std::to_string(ell) + " outside 1..62");
  }
  if (c.variants.empty()) problems.emplace_back("variants: must list at least one of 1, 2");
  for (auto v : c.variants) {
    if (v != 1 && v != 2) problems.push_back("variants: " + std::to_string(v) + " is not 1 or 2");
  }
  if (c.branches.empty()) problems.emplace_back("branches: must list at least one of cor3.1, cor3.2");
  for (auto b : c.branches) {
    if (b != Branch::Cor31 && b != Branch::Cor32) problems.push_back("branches: " + to_string(b) + " not searchable");
  }
  if (c.max_m == 0) problems.emplace_back("max_m: must be positive");
  if (c.max_s == 0) problems.emplace_back("max_s: must be positive");
  if (c.max_t == 0) problems.emplace_back("max_t: must be positive");
  if (c.r_policy == RPolicy::AllBelow && c.r_bound == 0) problems.emplace_back("r_policy: bound must be positive");
  for (auto e : c.compose_e) {
    if (e == 0) {
      problems.emplace_back("compose_e: exponents must be positive");
      continue;
    }
    for (auto k : c.k_values) {
      if (k == 0 || k > 16) continue;
      const std::uint64_t order = (std::uint64_t{1} << (2 * k)) - 1;
      if (std::gcd(e, order) != 1) {
        problems.push_back("compose_e: gcd(" + std::to_string(e) + ", q^2-1 = " + std::to_string(order) + ") != 1");
      }
    }
  }
  return problems;
}

SearchConfig parse_search_config(std::string_view text) {
  SearchConfig c;
  std::vector<std::string> problems;
  std::set<std::string> seen;
  const std::set<std::string> required = {"k",     "ell",   "variants", "branches",          "max_m",
                                          "max_s", "max_t", "r_policy", "sparsity_threshold"};

  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!seen.insert(key).second) {
      problems.push_back(key + ": given more than once");
      continue;
    }
    auto bad = [&](const std::string& why) { problems.push_back(key + ": " + why + " (got \"" + value + "\")"); };

    if (key == "k" || key == "ell" || key == "variants" || key == "compose_e") {
      auto list = parse_uint_list(value);
      if (!list) {
        bad("expected a comma-separated list of non-negative integers");
        continue;
      }
      if (key == "k") c.k_values = narrow<unsigned>(*list);
      if (key == "ell") c.ell_values = narrow<unsigned>(*list);
      if (key == "variants") c.variants = narrow<int>(*list);
      if (key == "compose_e") c.compose_e = *list;
    } else if (key == "branches") {
      c.branches.clear();
      for (const auto& item : split(value, ',')) {
        if (item == "cor3.1") {
          c.branches.push_back(Branch::Cor31);
        } else if (item == "cor3.2") {
          c.branches.push_back(Branch::Cor32);
        } else {
          bad("unknown branch \"" + item + "\"");
        }
      }
      std::sort(c.branches.begin(), c.branches.end());
      c.branches.erase(std::unique(c.branches.begin(), c.branches.end()), c.branches.end());
    } else if (key == "max_m" || key == "max_s" || key == "max_t" || key == "sparsity_threshold") {
      auto v = parse_uint(value);
      if (!v) {
        bad("expected a non-negative integer");
        continue;
      }
      if (key == "max_m") c.max_m = static_cast<unsigned>(*v);
      if (key == "max_s") c.max_s = *v;
      if (key == "max_t") c.max_t = *v;
      if (key == "sparsity_threshold") c.sparsity_threshold = static_cast<std::size_t>(*v);
    } else if (key == "r_policy") {
      if (value == "smallest-valid") {
        c.r_policy = RPolicy::SmallestValid;
      } else if (value.rfind("all-below:", 0) == 0) {
        auto v = parse_uint(trim(std::string_view(value).substr(10)));
        if (!v) {
          bad("expected all-below:N");
          continue;
        }
        c.r_policy = RPolicy::AllBelow;
        c.r_bound = *v;
      } else {
        bad("expected smallest-valid or all-below:N");
      }
    } else if (key == "verify") {
      if (value == "on") {
        c.verify = true;
      } else if (value == "off") {
        c.verify = false;
      } else {
        bad("expected on or off");
      }
    } else if (key == "output") {
      c.output = value;
    } else {
      problems.push_back(key + ": unknown key");
    }
  }
  for (const auto& key : required) {
    if (!seen.count(key)) problems.push_back(key + ": missing");
  }
  if (problems.empty()) problems = validate_search_config(c);
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return c;
}

SearchConfig load_search_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_search_config(buf.str());
}

// ---------------------------------------------------------------------------
// Records

std::string to_record(const Finding& x) {
  ordered_json j;
  j["p"] = x.p;
  j["k"] = x.k;
  j["q"] = x.q;
  j["r"] = x.r;
  j["e"] = x.e ? ordered_json(*x.e) : ordered_json(nullptr);
  j["branch"] = x.branch;
  j["variant"] = x.variant;
  j["ell"] = x.ell;
  j["multipliers"] = ordered_json::array();
  for (const auto& m : x.multipliers) j["multipliers"].push_back({m.s, m.t});
  j["B"] = x.b;
  j["f"] = x.f;
  j["terms_B"] = x.terms_b;
  j["terms_f"] = x.terms_f;
  j["verified"] = x.verified;
  j["seed"] = x.seed;
  return j.dump();
}

Finding parse_record(std::string_view text, std::size_t line) {
  static const std::set<std::string> keys = {"p",           "k", "q", "r",       "e",       "branch",   "variant", "ell",
                                             "multipliers", "B", "f", "terms_B", "terms_f", "verified", "seed"};
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw ParseError("record is not an object", line);
    std::set<std::string> present;
    for (const auto& item : j.items()) present.insert(item.key());
    if (present != keys) throw ParseError("record keys differ from the findings schema", line);
    Finding x;
    x.p = j.at("p").get<std::uint32_t>();
    x.k = j.at("k").get<unsigned>();
    x.q = j.at("q").get<std::uint64_t>();
    x.r = j.at("r").get<std::uint64_t>();
    if (!j.at("e").is_null()) x.e = j.at("e").get<std::uint64_t>();
    x.branch = j.at("branch").get<std::string>();
    x.variant = j.at("variant").get<int>();
    x.ell = j.at("ell").get<unsigned>();
    for (const auto& m : j.at("multipliers")) {
      if (!m.is_array() || m.size() != 2) throw ParseError("multipliers must be [s, t] pairs", line);
      x.multipliers.push_back({m[0].get<std::uint64_t>(), m[1].get<std::uint64_t>()});
    }
    x.b = j.at("B").get<std::string>();
    x.f = j.at("f").get<std::string>();
    x.terms_b = j.at("terms_B").get<std::size_t>();
    x.terms_f = j.at("terms_f").get<std::size_t>();
    x.verified = j.at("verified").get<bool>();
    x.seed = j.at("seed").get<std::string>();
    return x;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed record: ") + ex.what(), line);
  }
}

Polynomial canonicalize(const Polynomial& f) {
  if (f.is_zero()) throw InvalidArgument("cannot canonicalize the zero polynomial");
  const Polynomial reduced = reduce_mod_field(f);
  if (reduced.is_zero()) throw InvalidArgument("polynomial reduces to zero");
  return scale(reduced, reduced.owner()->inv(reduced.leading_coefficient()));
}

// ---------------------------------------------------------------------------
// Sweep

namespace {

struct Unit {
  unsigned k;
  unsigned ell;
  int variant;
  Branch branch;
};

using CanonicalKey = std::pair<std::uint64_t, std::vector<std::pair<std::uint64_t, Elem>>>;

struct Candidate {
  Finding finding;
  CanonicalKey key;
};

struct UnitResult {
  bool seed_skipped = false;
  std::uint64_t tuples = 0;
  std::uint64_t tuples_skipped = 0;
  std::vector<Candidate> candidates;
};

// Non-decreasing sequences of (s, t) pairs of each length 0..max_m, shorter
// first, lexicographic within a length.
std::vector<std::vector<MultiplierSpec>> multiplier_tuples(const SearchConfig& c) {
  std::vector<MultiplierSpec> pairs;
  for (std::uint64_t s = 1; s <= c.max_s; ++s) {
    for (std::uint64_t t = 1; t <= c.max_t; ++t) pairs.push_back({s, t});
  }
  std::vector<std::vector<MultiplierSpec>> out;
  std::vector<std::size_t> idx;
  auto rec = [&](auto&& self, std::size_t len, std::size_t from) -> void {
    if (idx.size() == len) {
      std::vector<MultiplierSpec> tuple;
      for (auto i : idx) tuple.push_back(pairs[i]);
      out.push_back(std::move(tuple));
      return;
    }
    for (std::size_t i = from; i < pairs.size(); ++i) {
      idx.push_back(i);
      self(self, len, i);
      idx.pop_back();
    }
  };
  for (std::size_t len = 0; len <= c.max_m; ++len) rec(rec, len, 0);
  return out;
}

CanonicalKey canonical_key(std::uint64_t q, const Polynomial& f) {
  const Polynomial canon = canonicalize(f);
  return {q, {canon.terms().begin(), canon.terms().end()}};
}

UnitResult run_unit(const Unit& unit, const SearchConfig& config,
                    const std::vector<std::vector<MultiplierSpec>>& tuples, const Limits& limits) {
  UnitResult out;
  const ConstructOptions opts{config.verify, limits};
  const Lemma4Params params{unit.k, unit.ell, unit.variant};
  std::optional<SeedPermutation> seed;
  try {
    seed = lemma4_seed(params, opts);
  } catch (const PreconditionFailed&) {
    out.seed_skipped = true;
    return out;
  }
  const std::uint64_t q = params.q();

  for (const auto& tuple : tuples) {
    ++out.tuples;
    const bool conditions_hold = std::all_of(tuple.begin(), tuple.end(), [&](const MultiplierSpec& m) {
      return lemma2_condition(m.s, m.t, q);
    });
    if (!conditions_hold) {
      ++out.tuples_skipped;
      continue;
    }
    std::int64_t weight = 0;
    for (const auto& m : tuple) weight += static_cast<std::int64_t>(m.s * m.t);
    const std::int64_t residue = unit.branch == Branch::Cor31 ? seed->v + weight : seed->v - weight;

    std::vector<std::uint64_t> rs;
    if (config.r_policy == RPolicy::SmallestValid) {
      try {
        rs.push_back(smallest_valid_r(residue, q));
      } catch (const PreconditionFailed&) {
      }
    } else {
      rs = valid_r_below(residue, q, config.r_bound);
    }
    if (rs.empty()) {
      ++out.tuples_skipped;
      continue;
    }

    for (auto r : rs) {
      std::optional<ConstructionResult> built;
      try {
        built = unit.branch == Branch::Cor31 ? cor3_product(*seed, tuple, r, opts) : cor3_quotient(*seed, tuple, r, opts);
      } catch (const NotDivisible&) {
      } catch (const PreconditionFailed&) {
      }
      if (!built) {
        ++out.tuples_skipped;
        break;
      }

      std::vector<std::optional<std::uint64_t>> exponents{std::nullopt};
      for (auto e : config.compose_e) exponents.emplace_back(e);
      for (const auto& e : exponents) {
        const Polynomial f = e ? compose_power(built->f, *e) : built->f;
        Finding x;
        x.p = 2;
        x.k = unit.k;
        x.q = q;
        x.r = r;
        x.e = e;
        x.branch = to_string(unit.branch);
        x.variant = unit.variant;
        x.ell = unit.ell;
        x.multipliers = tuple;
        x.b = format_polynomial(built->b);
        x.f = format_polynomial(f);
        x.terms_b = term_count(built->b);
        x.terms_f = term_count(f);
        x.seed = to_string(seed->provenance);
        if (!e) {
          x.verified = built->verified.value_or(false);
        } else if (config.verify && x.terms_f <= config.sparsity_threshold) {
          x.verified = is_permutation_bruteforce(f, limits);
          if (!x.verified) throw InternalInconsistency("composition " + x.f + " is not a permutation");
        }
        out.candidates.push_back({std::move(x), canonical_key(q, f)});
      }
    }
  }
  return out;
}

}  // namespace

SearchSummary run_search(const SearchConfig& config, const SearchOptions& options,
                         const std::function<void(const Finding&)>& sink) {
  if (auto problems = validate_search_config(config); !problems.empty()) throw ValidationError(std::move(problems));
  if (config.verify) {
    for (auto k : config.k_values) {
      const std::uint64_t size = std::uint64_t{1} << (2 * k);
      if (size > options.limits.max_scan_size) {
        throw ResourceLimit("verification over F_{2^" + std::to_string(2 * k) + "} (size " + std::to_string(size) +
                            ") exceeds the scan cap of " + std::to_string(options.limits.max_scan_size));
      }
    }
  }

  std::ofstream out_file;
  if (!config.output.empty()) {
    out_file.open(config.output, std::ios::out | std::ios::trunc);
    if (!out_file) throw IoError("cannot write findings to " + config.output);
  }

  std::vector<Unit> units;
  for (auto k : config.k_values) {
    for (auto ell : config.ell_values) {
      for (auto variant : config.variants) {
        for (auto branch : config.branches) units.push_back({k, ell, variant, branch});
      }
    }
  }
  const auto tuples = multiplier_tuples(config);

  std::vector<std::promise<UnitResult>> promises(units.size());
  std::vector<std::future<UnitResult>> futures;
  for (auto& p : promises) futures.push_back(p.get_future());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  auto worker = [&] {
    while (!abort) {
      const std::size_t i = next++;
      if (i >= units.size()) return;
      try {
        promises[i].set_value(run_unit(units[i], config, tuples, options.limits));
      } catch (...) {
        promises[i].set_exception(std::current_exception());
      }
    }
  };
  std::vector<std::thread> pool;
  struct Joiner {
    std::vector<std::thread>& threads;
    std::atomic<bool>& abort;
    ~Joiner() {
      abort = true;
      for (auto& t : threads) t.join();
    }
  } joiner{pool, abort};
  const unsigned workers = std::max(1u, options.threads);
  for (unsigned i = 0; i + 1 < workers; ++i) pool.emplace_back(worker);

  // Merge in enumeration order. With one worker this thread does the work.
  SearchSummary summary;
  summary.units = units.size();
  std::set<CanonicalKey> seen;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (workers == 1) {
      try {
        promises[i].set_value(run_unit(units[i], config, tuples, options.limits));
      } catch (...) {
        promises[i].set_exception(std::current_exception());
      }
    }
    UnitResult result = futures[i].get();
    summary.seeds_skipped += result.seed_skipped ? 1 : 0;
    summary.tuples += result.tuples;
    summary.tuples_skipped += result.tuples_skipped;
    std::uint64_t emitted_here = 0;
    for (auto& cand : result.candidates) {
      ++summary.candidates;
      if (!seen.insert(std::move(cand.key)).second) {
        ++summary.duplicates;
        continue;
      }
      if (cand.finding.terms_f > config.sparsity_threshold) {
        ++summary.above_threshold;
        continue;
      }
      ++summary.emitted;
      ++emitted_here;
      if (out_file.is_open()) out_file << to_record(cand.finding) << '\n';
      if (sink) sink(cand.finding);
    }
    if (out_file.is_open()) {
      out_file.flush();
      if (!out_file) throw IoError("write to " + config.output + " failed");
    }
    if (options.progress) {
      const auto& u = units[i];
      *options.progress << "[" << (i + 1) << "/" << units.size() << "] k=" << u.k << " ell=" << u.ell
                        << " variant=" << u.variant << " " << to_string(u.branch) << ": "
                        << (result.seed_skipped ? "seed condition fails, skipped"
                                                : std::to_string(result.candidates.size()) + " candidates, " +
                                                      std::to_string(emitted_here) + " emitted")
                        << '\n';
    }
  }
  if (options.progress) {
    *options.progress << "units " << summary.units << " (seed skipped " << summary.seeds_skipped << "), tuples "
                      << summary.tuples << " (skipped " << summary.tuples_skipped << "), candidates "
                      << summary.candidates << ", duplicates " << summary.duplicates << ", above threshold "
                      << summary.above_threshold << ", emitted " << summary.emitted << '\n';
  }
  return summary;
}

// ---------------------------------------------------------------------------
// Report

FindingsReport summarize(std::istream& in) {
  FindingsReport report;
  std::map<std::tuple<std::uint64_t, std::string, std::size_t>, std::size_t> counts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    Finding x = parse_record(line, line_no);
    ++report.total;
    ++counts[{x.q, x.branch, x.terms_f}];
    auto it = report.sparsest.find(x.q);
    if (it == report.sparsest.end() || x.terms_f < it->second.terms_f) report.sparsest[x.q] = std::move(x);
  }
  for (const auto& [key, count] : counts) {
    report.rows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), count});
  }
  return report;
}

FindingsReport summarize_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read findings file " + path);
  return summarize(in);
}

namespace {

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c + 1 == row.size()) {
        os << row[c];
      } else {
        os << std::left << std::setw(static_cast<int>(width[c] + 2)) << row[c];
      }
    }
    os << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return os.str();
}

}  // namespace

std::string FindingsReport::render() const {
  std::ostringstream os;
  os << "total findings: " << total << "\n\n";
  std::vector<std::vector<std::string>> body;
  for (const auto& row : rows) {
    body.push_back({std::to_string(row.q), row.branch, std::to_string(row.terms_f), std::to_string(row.count)});
  }
  os << render_table({"q", "branch", "terms_f", "count"}, body) << '\n';
  body.clear();
  for (const auto& [q, x] : sparsest) {
    body.push_back({std::to_string(q), std::to_string(x.terms_f), std::to_string(x.r),
                    x.e ? std::to_string(*x.e) : "-", x.branch, x.f});
  }
  os << "sparsest per q:\n" << render_table({"q", "terms_f", "r", "e", "branch", "f"}, body);
  return os.str();
}

}  // namespace ppoly
