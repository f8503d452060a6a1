#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ppoly/errors.hpp"
#include "ppoly/search.hpp"
#include "support.hpp"

namespace ppoly {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("ppoly_search_test_" + name); }

SearchConfig small_config() {
  SearchConfig c;
  c.k_values = {2};
  c.ell_values = {2};
  c.variants = {1};
  c.branches = {Branch::Cor31};
  c.max_m = 1;
  c.max_s = 2;
  c.max_t = 1;
  c.sparsity_threshold = 6;
  return c;
}

std::vector<Finding> collect(const SearchConfig& c, SearchSummary* summary = nullptr, unsigned threads = 1) {
  std::vector<Finding> out;
  SearchOptions opts;
  opts.threads = threads;
  auto s = run_search(c, opts, [&](const Finding& x) { out.push_back(x); });
  if (summary) *summary = s;
  return out;
}

TEST(Canonicalize, Examples) {
  const auto f4 = make_field(2, 2);
  EXPECT_EQ(canonicalize(Polynomial::monomial(f4, 1, 3)), Polynomial::monomial(f4, 1));
  const Polynomial monic(f4, {{3, 1}, {1, 2}});
  EXPECT_EQ(canonicalize(monic), monic);
  // w * (X^3 + w X) = w X^3 + (w+1) X; scaling by w^{-1} = w+1 gives X^3 + w X
  const Polynomial scaled(f4, {{3, 2}, {1, 3}});
  EXPECT_EQ(canonicalize(scaled), Polynomial(f4, {{3, 1}, {1, 2}}));
  EXPECT_THROW(canonicalize(Polynomial(f4)), InvalidArgument);
}

TEST(Canonicalize, EqualFormsArePermutationsTogether) {
  std::mt19937_64 rng(12);
  const auto field = make_quadratic_field(2, 2);
  for (int i = 0; i < 300; ++i) {
    Polynomial f(field);
    for (int j = 0; j < 3; ++j) f.add_term(rng() % 40, static_cast<Elem>(rng() % 16));
    if (f.is_zero() || reduce_mod_field(f).is_zero()) continue;
    const Elem c = 1 + static_cast<Elem>(rng() % 15);
    const auto g = scale(f, c);
    ASSERT_EQ(canonicalize(f), canonicalize(g));
    ASSERT_EQ(is_permutation_bruteforce(f), is_permutation_bruteforce(g));
  }
}

TEST(SearchConfigParse, DemoFileParses) {
  const auto c = load_search_config(PPOLY_SOURCE_DIR "/configs/demo.conf");
  EXPECT_EQ(c.k_values, (std::vector<unsigned>{2, 4}));
  EXPECT_EQ(c.ell_values, (std::vector<unsigned>{1, 2, 3, 4}));
  EXPECT_EQ(c.branches, (std::vector<Branch>{Branch::Cor31, Branch::Cor32}));
  EXPECT_EQ(c.max_t, 4u);
  EXPECT_EQ(c.r_policy, RPolicy::SmallestValid);
  EXPECT_TRUE(c.verify);
}

TEST(SearchConfigParse, ListsEveryProblem) {
  const std::string text =
      "k = 2\nell = 1..2\nvariants = 1, 3\nbranches = cor3.1, cor9\nmax_m = 1\nmax_s = 2\nmax_t = 0\n"
      "r_policy = smallest-valid\nsparsity_threshold = 4\ncolour = blue\n";
  try {
    parse_search_config(text);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string all = e.what();
    EXPECT_NE(all.find("colour"), std::string::npos);
    EXPECT_NE(all.find("cor9"), std::string::npos);
  }
  // semantic problems are reported together once syntax is clean
  try {
    parse_search_config(
        "k = 2\nell = 1\nvariants = 1, 3\nbranches = cor3.1\nmax_m = 1\nmax_s = 2\nmax_t = 0\n"
        "r_policy = smallest-valid\nsparsity_threshold = 4\ncompose_e = 3\n");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    std::string all;
    for (const auto& p : e.problems()) all += p + "\n";
    EXPECT_NE(all.find("max_t"), std::string::npos);
    EXPECT_NE(all.find("variants"), std::string::npos);
    EXPECT_NE(all.find("compose_e"), std::string::npos);
    EXPECT_GE(e.problems().size(), 3u);
  }
}

TEST(SearchConfigParse, MissingAndDuplicateKeys) {
  try {
    parse_search_config("k = 2\nk = 4\n");
    FAIL();
  } catch (const ValidationError& e) {
    const std::string all = e.what();
    EXPECT_NE(all.find("more than once"), std::string::npos);
    EXPECT_NE(all.find("sparsity_threshold: missing"), std::string::npos);
  }
}

TEST(SearchConfigParse, RPolicyAndVerify) {
  const auto c = parse_search_config(
      "k = 1\nell = 1\nvariants = 1\nbranches = cor3.1\nmax_m = 1\nmax_s = 2\nmax_t = 3\n"
      "r_policy = all-below:40\nsparsity_threshold = 4\nverify = off\ncompose_e = 2, 5\n");
  EXPECT_EQ(c.r_policy, RPolicy::AllBelow);
  EXPECT_EQ(c.r_bound, 40u);
  EXPECT_FALSE(c.verify);
  EXPECT_EQ(c.compose_e, (std::vector<std::uint64_t>{2, 5}));
  EXPECT_THROW(load_search_config("/nonexistent/ppoly.conf"), IoError);
}

TEST(Records, RoundTripAndSchema) {
  Finding x;
  x.k = 2;
  x.q = 4;
  x.r = 2;
  x.branch = "cor3.1";
  x.variant = 1;
  x.ell = 2;
  x.multipliers = {{2, 1}};
  x.b = "1*X^7 + 1*X^6 + 1*X^5 + 1*X^3 + 1";
  x.f = "1*X^11 + 1*X^8 + 1*X^5";
  x.terms_b = 5;
  x.terms_f = 3;
  x.verified = true;
  x.seed = "lemma4-variant-1";
  const auto line = to_record(x);
  EXPECT_EQ(line,
            R"({"p":2,"k":2,"q":4,"r":2,"e":null,"branch":"cor3.1","variant":1,"ell":2,"multipliers":[[2,1]],)"
            R"("B":"1*X^7 + 1*X^6 + 1*X^5 + 1*X^3 + 1","f":"1*X^11 + 1*X^8 + 1*X^5","terms_B":5,"terms_f":3,)"
            R"("verified":true,"seed":"lemma4-variant-1"})");
  EXPECT_EQ(parse_record(line), x);
  x.e = 7;
  EXPECT_EQ(parse_record(to_record(x)), x);

  EXPECT_THROW(parse_record("{\"p\":2}", 3), ParseError);
  EXPECT_THROW(parse_record("not json", 1), ParseError);
  try {
    parse_record("[1,2]", 9);
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 9u);
  }
}

TEST(RunSearch, FindsTheFiveTermProduct) {
  SearchSummary summary;
  const auto findings = collect(small_config(), &summary);
  auto it = std::find_if(findings.begin(), findings.end(), [](const Finding& x) {
    return x.b == "1*X^7 + 1*X^6 + 1*X^5 + 1*X^3 + 1";
  });
  ASSERT_NE(it, findings.end());
  EXPECT_EQ(it->r, 2u);
  EXPECT_EQ(it->q, 4u);
  EXPECT_TRUE(it->verified);
  EXPECT_EQ(it->terms_b, 5u);
  EXPECT_EQ(it->multipliers, (std::vector<MultiplierSpec>{{2, 1}}));
  EXPECT_EQ(summary.emitted, findings.size());
}

TEST(RunSearch, ZeroThresholdEmitsNothing) {
  auto c = small_config();
  c.sparsity_threshold = 0;
  SearchSummary summary;
  EXPECT_TRUE(collect(c, &summary).empty());
  EXPECT_GT(summary.candidates, 0u);
  EXPECT_EQ(summary.emitted, 0u);
}

TEST(RunSearch, DeterministicFiles) {
  auto c = load_search_config(PPOLY_SOURCE_DIR "/configs/demo.conf");
  c.output = temp_path("a.jsonl").string();
  run_search(c);
  const auto first = read_file(c.output);
  c.output = temp_path("b.jsonl").string();
  SearchOptions threaded;
  threaded.threads = 3;
  run_search(c, threaded);
  const auto second = read_file(c.output);
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, second);
  fs::remove(temp_path("a.jsonl"));
  fs::remove(temp_path("b.jsonl"));
}

TEST(RunSearch, EveryEmittedFindingIsSound) {
  auto c = load_search_config(PPOLY_SOURCE_DIR "/configs/demo.conf");
  c.compose_e = {7};
  for (const auto& x : collect(c)) {
    ASSERT_TRUE(x.verified);
    const auto field = make_quadratic_field(2, x.k);
    const auto b = parse_polynomial(field, x.b);
    auto expected = lemma1_polynomial(x.r, b);
    if (x.e) expected = compose_power(expected, *x.e);
    ASSERT_EQ(format_polynomial(expected), x.f);
    ASSERT_TRUE(is_permutation_bruteforce(parse_polynomial(field, x.f)));
    ASSERT_LE(x.terms_f, c.sparsity_threshold);
  }
}

TEST(RunSearch, ThresholdIsMonotone) {
  auto c = small_config();
  c.max_s = 3;
  c.max_t = 3;
  c.variants = {1, 2};
  c.ell_values = {1, 2, 3};
  c.branches = {Branch::Cor31, Branch::Cor32};
  std::set<std::string> previous;
  for (std::size_t threshold = 0; threshold <= 12; ++threshold) {
    c.sparsity_threshold = threshold;
    std::set<std::string> now;
    for (const auto& x : collect(c)) now.insert(x.f);
    for (const auto& f : previous) ASSERT_TRUE(now.count(f)) << f;
    previous = std::move(now);
  }
}

TEST(RunSearch, NoDuplicateCanonicalForms) {
  auto c = load_search_config(PPOLY_SOURCE_DIR "/configs/demo.conf");
  std::set<std::pair<std::uint64_t, std::string>> seen;
  for (const auto& x : collect(c)) {
    const auto field = make_quadratic_field(2, x.k);
    ASSERT_TRUE(seen.insert({x.q, format_polynomial(canonicalize(parse_polynomial(field, x.f)))}).second);
  }
}

TEST(RunSearch, AllBelowPolicyEnumeratesSeveralR) {
  auto c = small_config();
  c.r_policy = RPolicy::AllBelow;
  c.r_bound = 16;
  c.sparsity_threshold = 16;
  std::set<std::uint64_t> rs;
  for (const auto& x : collect(c)) rs.insert(x.r);
  EXPECT_GT(rs.size(), 1u);
  for (auto r : rs) EXPECT_LT(r, 16u);
}

TEST(RunSearch, Errors) {
  auto c = small_config();
  c.output = "/nonexistent-dir/findings.jsonl";
  EXPECT_THROW(run_search(c), IoError);
  c.output.clear();
  SearchOptions tight;
  tight.limits.max_scan_size = 8;
  EXPECT_THROW(run_search(c, tight), ResourceLimit);
  c.verify = false;
  EXPECT_NO_THROW(run_search(c, tight));
  c.max_t = 0;
  EXPECT_THROW(run_search(c), ValidationError);
}

TEST(Summarize, EmptySingleAndDemo) {
  std::istringstream empty("");
  const auto r0 = summarize(empty);
  EXPECT_EQ(r0.total, 0u);
  EXPECT_TRUE(r0.rows.empty());
  EXPECT_NE(r0.render().find("total findings: 0"), std::string::npos);

  const auto findings = collect(small_config());
  ASSERT_FALSE(findings.empty());
  std::istringstream one(to_record(findings.front()) + "\n");
  const auto r1 = summarize(one);
  ASSERT_EQ(r1.rows.size(), 1u);
  EXPECT_EQ(r1.rows[0].terms_f, findings.front().terms_f);
  EXPECT_EQ(r1.rows[0].count, 1u);

  auto c = load_search_config(PPOLY_SOURCE_DIR "/configs/demo.conf");
  c.output = temp_path("demo.jsonl").string();
  run_search(c);
  const auto report = summarize_file(c.output);
  std::map<std::uint64_t, std::size_t> min_terms;
  std::size_t total = 0;
  std::ifstream in(c.output);
  std::string line;
  while (std::getline(in, line)) {
    const auto x = parse_record(line);
    ++total;
    auto [it, inserted] = min_terms.emplace(x.q, x.terms_f);
    if (!inserted) it->second = std::min(it->second, x.terms_f);
  }
  EXPECT_EQ(report.total, total);
  for (const auto& [q, terms] : min_terms) EXPECT_EQ(report.sparsest.at(q).terms_f, terms);
  fs::remove(c.output);
}

TEST(Summarize, MalformedLineReportsNumber) {
  std::istringstream in(to_record(collect(small_config()).front()) + "\n\n{broken\n");
  try {
    summarize(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(summarize_file("/nonexistent/findings.jsonl"), IoError);
}

}  // namespace
}  // namespace ppoly
