// ppoly: verify, construct and search permutation polynomials over F_{q^2}.
//
// Exit codes: 0 success or permutation, 1 negative verdict, 2 usage or
// validation error, 3 resource limit.

#include <cstdint>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ppoly/construct.hpp"
#include "ppoly/errors.hpp"
#include "ppoly/gf.hpp"
#include "ppoly/mu.hpp"
#include "ppoly/numeric.hpp"
#include "ppoly/poly.hpp"
#include "ppoly/search.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

const char* verdict(bool permutes) { return permutes ? "PERMUTATION" : "NOT A PERMUTATION"; }

std::uint32_t checked_prime(std::uint64_t p) {
  if (p > 0xffffffffu || !ppoly::is_prime(p)) throw ppoly::InvalidArgument(std::to_string(p) + " is not prime");
  return static_cast<std::uint32_t>(p);
}

int cmd_field_info(std::uint64_t p_in, unsigned n) {
  const auto field = ppoly::make_field(checked_prime(p_in), n);
  std::cout << "p: " << field->p() << "\n"
            << "n: " << field->n() << "\n"
            << "modulus: " << ppoly::format_prime_poly(field->modulus()) << "\n"
            << "size: " << field->size() << "\n";
  if (!field->is_quadratic()) {
    std::cout << "q: n/a (odd degree)\n";
    return kExitOk;
  }
  const std::uint64_t q = field->q();
  std::cout << "q: " << q << "\n"
            << "q^2: " << field->size() << "\n"
            << "|mu_{q+1}|: " << ppoly::enumerate_mu(field).size() << "\n"
            << "q^2-1 = ";
  const auto factors = ppoly::factorize(field->size() - 1);
  if (factors.empty()) std::cout << "1";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) std::cout << " * ";
    std::cout << factors[i].prime;
    if (factors[i].exponent > 1) std::cout << "^" << factors[i].exponent;
  }
  std::cout << "\n";
  return kExitOk;
}

struct VerifyArgs {
  std::uint64_t p = 2;
  unsigned k = 1;
  std::string mode = "full";
  std::string poly;
  std::int64_t r = 0;
  std::string a;
  std::uint64_t max_scan = ppoly::Limits{}.max_scan_size;
};

int cmd_verify(const VerifyArgs& args) {
  const auto field = ppoly::make_quadratic_field(checked_prime(args.p), args.k);
  const ppoly::Limits limits{args.max_scan};
  if (args.mode == "full") {
    if (args.poly.empty()) throw ppoly::InvalidArgument("--poly is required in full mode");
    const auto f = ppoly::parse_polynomial(field, args.poly);
    const bool permutes = ppoly::is_permutation_bruteforce(f, limits);
    std::cout << verdict(permutes) << "\n";
    return permutes ? kExitOk : kExitNegative;
  }
  if (args.mode != "lemma1") throw ppoly::InvalidArgument("--mode must be full or lemma1");
  if (args.a.empty()) throw ppoly::InvalidArgument("--A is required in lemma1 mode");
  if (args.r <= 0) throw ppoly::InvalidArgument("--r must be positive in lemma1 mode");
  const auto a = ppoly::parse_polynomial(field, args.a);
  const auto q = static_cast<std::int64_t>(field->q());
  const auto f = ppoly::lemma1_polynomial(static_cast<std::uint64_t>(args.r), a);
  const bool oracle = ppoly::is_permutation_bruteforce(f, limits);
  const auto g = std::gcd(args.r, q - 1);
  const bool mu_ok = ppoly::permutes_mu(args.r, a, ppoly::enumerate_mu(field));
  std::cout << "f: " << ppoly::format_polynomial(f) << "\n"
            << "gcd(r, q-1) = " << g << (g == 1 ? " (ok)" : " (fails)") << "\n"
            << "X^r A(X)^(q-1) on mu_{q+1}: " << (mu_ok ? "permutes" : "does not permute") << "\n"
            << "criterion: " << verdict(g == 1 && mu_ok) << "\n"
            << "oracle: " << verdict(oracle) << "\n"
            << verdict(oracle) << "\n";
  if ((g == 1 && mu_ok) != oracle) std::cerr << "warning: criterion and oracle disagree\n";
  return oracle ? kExitOk : kExitNegative;
}

struct ConstructArgs {
  std::string branch;
  unsigned k = 0;
  unsigned ell = 0;
  int variant = 1;
  std::optional<std::uint64_t> t;
  std::optional<std::uint64_t> r;
  std::vector<std::string> mult;
  bool no_verify = false;
  bool record = false;
};

std::vector<ppoly::MultiplierSpec> parse_mults(const std::vector<std::string>& items) {
  std::vector<ppoly::MultiplierSpec> out;
  for (const auto& item : items) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(item);
      out.push_back({std::stoull(item.substr(0, colon)), std::stoull(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw ppoly::InvalidArgument("--mult expects s:t, got \"" + item + "\"");
    }
    if (out.back().s == 0 || out.back().t == 0) throw ppoly::InvalidArgument("--mult needs s, t >= 1");
  }
  return out;
}

int cmd_construct(const ConstructArgs& args) {
  const ppoly::ConstructOptions opts{!args.no_verify, {}};
  std::optional<ppoly::ConstructionResult> result;
  if (args.branch == "cor5.1" || args.branch == "cor5.2") {
    result = ppoly::cor5(args.k, args.ell, args.variant, args.branch == "cor5.1" ? 1 : 2,
                         args.branch == "cor5.1" ? args.t : std::nullopt, args.r, opts);
  } else if (args.branch == "cor3.1" || args.branch == "cor3.2") {
    const auto seed = ppoly::lemma4_seed({args.k, args.ell, args.variant}, opts);
    const auto specs = parse_mults(args.mult);
    std::int64_t weight = 0;
    for (const auto& m : specs) weight += static_cast<std::int64_t>(m.s * m.t);
    const bool product = args.branch == "cor3.1";
    const std::uint64_t q = seed.field()->q();
    const std::uint64_t r = args.r ? *args.r : ppoly::smallest_valid_r(product ? seed.v + weight : seed.v - weight, q);
    result = product ? ppoly::cor3_product(seed, specs, r, opts) : ppoly::cor3_quotient(seed, specs, r, opts);
  } else {
    throw ppoly::InvalidArgument("--branch must be one of cor5.1, cor5.2, cor3.1, cor3.2");
  }

  const auto& res = *result;
  const std::uint64_t q = res.f.owner()->q();
  if (args.record) {
    ppoly::Finding x;
    x.p = 2;
    x.k = args.k;
    x.q = q;
    x.r = res.r;
    x.branch = ppoly::to_string(res.branch);
    x.variant = args.variant;
    x.ell = args.ell;
    x.multipliers = res.specs;
    x.b = ppoly::format_polynomial(res.b);
    x.f = ppoly::format_polynomial(res.f);
    x.terms_b = ppoly::term_count(res.b);
    x.terms_f = ppoly::term_count(res.f);
    x.verified = res.verified.value_or(false);
    x.seed = ppoly::to_string(res.seed);
    std::cout << ppoly::to_record(x) << "\n";
    return kExitOk;
  }
  std::cout << "branch: " << ppoly::to_string(res.branch) << "\n"
            << "q: " << q << "\n"
            << "r: " << res.r << "\n"
            << "B: " << ppoly::format_polynomial(res.b) << "\n"
            << "f: " << ppoly::format_polynomial(res.f) << "\n"
            << "terms_B: " << ppoly::term_count(res.b) << "\n"
            << "terms_f: " << ppoly::term_count(res.f) << "\n"
            << "verified: " << (res.verified ? (*res.verified ? "yes" : "no") : "skipped") << "\n";
  return kExitOk;
}

int cmd_search(const std::string& config_path, const std::string& output, unsigned threads) {
  auto config = ppoly::load_search_config(config_path);
  if (!output.empty()) config.output = output;
  if (config.output.empty()) throw ppoly::InvalidArgument("no output path: set `output` in the config or pass --output");
  ppoly::SearchOptions options;
  options.threads = threads;
  options.progress = &std::cerr;
  ppoly::run_search(config, options);
  return kExitOk;
}

int cmd_summarize(const std::string& path) {
  std::cout << ppoly::summarize_file(path).render();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct, verify and search permutation polynomials of the form X^r A(X^(q-1))"};
  app.require_subcommand(1, 1);

  std::uint64_t fi_p = 0;
  unsigned fi_n = 0;
  auto* field_info = app.add_subcommand("field-info", "Describe F_{p^n} and its subgroup mu_{q+1}");
  field_info->add_option("-p,--p", fi_p, "Characteristic")->required();
  field_info->add_option("-n,--n", fi_n, "Extension degree")->required();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check whether a polynomial permutes F_{q^2}");
  verify->add_option("-p,--p", va.p, "Characteristic")->required();
  verify->add_option("-k,--k", va.k, "q = p^k")->required();
  verify->add_option("--mode", va.mode, "full | lemma1")->check(CLI::IsMember({"full", "lemma1"}));
  verify->add_option("--poly", va.poly, "Polynomial, e.g. \"1*X^6 + 1*X^4 + 1*X^3\" (full mode)");
  verify->add_option("--r", va.r, "Exponent r (lemma1 mode)");
  verify->add_option("--A", va.a, "Polynomial A (lemma1 mode)");
  verify->add_option("--max-scan", va.max_scan, "Largest field size to scan");

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build a permutation polynomial from a characteristic-2 seed");
  construct->add_option("--branch", ca.branch, "cor5.1 | cor5.2 | cor3.1 | cor3.2")->required();
  construct->add_option("-k,--k", ca.k, "q = 2^k")->required();
  construct->add_option("--ell", ca.ell, "Q = 2^ell")->required();
  construct->add_option("--variant", ca.variant, "Seed variant 1 or 2")->required();
  construct->add_option("--t", ca.t, "Multiplier step t (cor5.1)");
  construct->add_option("--r", ca.r, "Exponent r; smallest valid when omitted");
  construct->add_option("--mult", ca.mult, "Multipliers s:t (cor3.x), repeatable")->delimiter(',');
  construct->add_flag("--no-verify", ca.no_verify, "Skip the brute-force check");
  construct->add_flag("--record", ca.record, "Print one findings record instead of the report");

  std::string config_path, output;
  unsigned threads = 1;
  auto* search = app.add_subcommand("search", "Run a sweep described by a config file");
  search->add_option("config", config_path, "Config file")->required();
  search->add_option("-o,--output", output, "Findings file (overrides the config)");
  search->add_option("-j,--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));

  std::string findings_path;
  auto* summarize = app.add_subcommand("summarize", "Tabulate a findings file");
  summarize->add_option("findings", findings_path, "Findings file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*field_info) return cmd_field_info(fi_p, fi_n);
    if (*verify) return cmd_verify(va);
    if (*construct) return cmd_construct(ca);
    if (*search) return cmd_search(config_path, output, threads);
    if (*summarize) return cmd_summarize(findings_path);
  } catch (const ppoly::ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const ppoly::ValidationError& e) {
    std::cerr << "invalid config:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return kExitUsage;
  } catch (const ppoly::PreconditionFailed& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ppoly::InternalInconsistency& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kExitNegative;
  } catch (const ppoly::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
