#include "cli.hpp"

#include "dmoments/haar_mc.hpp"
#include "dmoments/moment_constants.hpp"
#include "dmoments/reference_tables.hpp"
#include "dmoments/special_functions.hpp"
#include "dmoments/tau.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace dmoments::cli {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct RunConfig {
  std::string group = "usp";
  unsigned long k_max = 10;
  unsigned long k = 1;
  std::string method = "recurrence";
  std::string format = "exact";
  int digits = 30;
  std::uint64_t factor_effort = 200000;
  unsigned N = 1;
  int m = -1;  // -1: the group's own derivative order
  std::uint64_t samples = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  unsigned long cutoff = 100000;
  std::string suite;
  unsigned long det_cap = 8;
  std::string cache_dir;
  std::string out_path;
  bool json_summary = false;
};

std::optional<TauCache> cache_for(const RunConfig& cfg) {
  if (!cfg.cache_dir.empty()) return TauCache(cfg.cache_dir);
  return TauCache::from_environment();
}

// Writes to --out when given, otherwise to the console stream.
void emit(const RunConfig& cfg, std::ostream& console, const std::string& text) {
  if (cfg.out_path.empty()) {
    console << text;
    return;
  }
  std::ofstream file(cfg.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open " + cfg.out_path);
  file << text;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// --- bk ----------------------------------------------------------------------

int cmd_bk(const RunConfig& cfg, std::ostream& out) {
  const SymmetryClass group = symmetry_class_from_string(cfg.group);
  BkTableOptions options;
  options.factor = cfg.format == "factored" || cfg.format == "json" || cfg.format == "csv";
  options.factor_effort = cfg.factor_effort;
  options.cache = cache_for(cfg);
  const auto rows = bk_table(group, cfg.k_max, tau_method_from_string(cfg.method), options);

  std::ostringstream os;
  if (cfg.format == "json") {
    json j;
    j["group"] = to_string(group);
    j["method"] = to_string(tau_method_from_string(cfg.method));
    j["k_max"] = cfg.k_max;
    j["decimal_digits"] = cfg.digits;
    j["rows"] = json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"group", to_string(group)},
                           {"k", r.k},
                           {"exact", to_string(r.value)},
                           {"factored", format_factored(r.factored)},
                           {"decimal", to_decimal(r.value, cfg.digits)}});
    os << j.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    os << "group,k,exact,factored,decimal\n";
    for (const auto& r : rows)
      os << to_string(group) << "," << r.k << "," << to_string(r.value) << "," << csv_field(format_factored(r.factored))
         << "," << to_decimal(r.value, cfg.digits) << "\n";
  } else {
    for (const auto& r : rows) {
      os << r.k << ": ";
      if (cfg.format == "exact") os << to_string(r.value);
      else if (cfg.format == "factored") os << format_factored(r.factored);
      else os << to_decimal(r.value, cfg.digits);
      os << "\n";
    }
  }
  emit(cfg, out, os.str());
  return kOk;
}

// --- verify ------------------------------------------------------------------

struct SuiteReport {
  std::string suite;
  std::size_t checks = 0;
  std::vector<std::string> failures;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

void suite_paper_tables(SuiteReport& rep) {
  BkTableOptions options;
  options.factor = true;
  std::map<SymmetryClass, std::vector<BkRecord>> tables;
  for (const auto& ref : reference_values()) {
    auto it = tables.find(ref.group);
    if (it == tables.end()) it = tables.emplace(ref.group, bk_table(ref.group, 10, TauMethod::recurrence, options)).first;
    const BkRecord& rec = it->second.at(ref.k - 1);
    const std::string got = to_string(rec.value);
    rep.check(got == ref.exact, to_string(ref.group) + " k=" + std::to_string(ref.k) + ": expected " + ref.exact +
                                    ", got " + got);
  }
}

void suite_recurrence_vs_det(SuiteReport& rep) {
  constexpr std::size_t k_max = 8, max_degree = 12;
  for (int ell = -2; ell <= 2; ++ell) {
    const TauTable rec = tau_recurrence_table(k_max, ell, recurrence_base_degree(k_max, ell));
    for (std::size_t k = 0; k <= k_max; ++k) {
      const std::size_t d = std::min(max_degree, rec.certified_degrees[k]);
      const TruncSeries det = tau_det(k, ell, d);
      const TruncSeries got = rec.entries[k].truncated(d);
      std::string diff;
      for (std::size_t n = 0; n <= d && diff.empty(); ++n)
        if (got[n] != det[n])
          diff = "ell=" + std::to_string(ell) + " k=" + std::to_string(k) + " coeff " + std::to_string(n) +
                 ": recurrence " + to_string(got[n]) + ", determinant " + to_string(det[n]);
      rep.check(diff.empty(), diff);
    }
  }
}

void suite_dodgson(SuiteReport& rep, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> entry(-20, 20);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 5;
    RationalMatrix a(n, std::vector<Rational>(n));
    for (auto& row : a)
      for (auto& v : row) v = entry(rng);
    rep.check(dodgson_check(a, rng()), "matrix " + std::to_string(trial) + " (size " + std::to_string(n) + ")");
  }
}

void suite_bivariate(SuiteReport& rep) {
  for (int ell : {-1, 0}) {
    for (std::size_t k = 0; k <= 4; ++k) {
      const std::size_t dx = 14, dy = 5;
      const auto cur = bivariate_tau(k, ell, dx, dy);
      const std::string tag = "ell=" + std::to_string(ell) + " k=" + std::to_string(k);
      rep.check(cur == tau_specialized(tau_det(k, ell, dy), k, ell, dx, dy), "scaling " + tag);
      if (k == 0) continue;
      const auto rhs = cur * partial_x(partial_y(cur)) - partial_x(cur) * partial_y(cur);
      const auto lhs = (bivariate_tau(k + 1, ell, dx, dy) * bivariate_tau(k - 1, ell, dx, dy))
                           .truncated(rhs.deg_x(), rhs.deg_y());
      rep.check(lhs == rhs, "recurrence " + tag);
    }
  }
}

void suite_mc_identities(SuiteReport& rep, std::uint64_t seed) {
  for (unsigned N : {1U, 5U, 20U, 50U}) {
    for (auto g : {SymmetryClass::SO, SymmetryClass::USp, SymmetryClass::OMinus}) {
      double worst = 0.0;
      for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng(sample_seed(seed, i));
        const auto s = g == SymmetryClass::USp      ? sample_symplectic(N, rng)
                       : g == SymmetryClass::SO     ? sample_orthogonal(N, OrthogonalComponent::plus, rng)
                                                    : sample_orthogonal(N, OrthogonalComponent::minus, rng);
        worst = std::max(worst, identity_relative_error(s));
      }
      std::ostringstream msg;
      msg << to_string(g) << " N=" << N << ": worst relative error " << worst;
      rep.check(worst < 1e-8, msg.str());
    }
  }
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  SuiteReport rep;
  rep.suite = cfg.suite;
  const auto t0 = Clock::now();
  if (cfg.suite == "paper-tables") suite_paper_tables(rep);
  else if (cfg.suite == "recurrence-vs-det") suite_recurrence_vs_det(rep);
  else if (cfg.suite == "dodgson") suite_dodgson(rep, cfg.seed);
  else if (cfg.suite == "bivariate") suite_bivariate(rep);
  else suite_mc_identities(rep, cfg.seed);
  const double elapsed = seconds_since(t0);

  std::ostringstream os;
  if (cfg.json_summary) {
    json j{{"suite", rep.suite},
           {"passed", rep.failures.empty()},
           {"checks", rep.checks},
           {"failures", rep.failures},
           {"wall_seconds", elapsed}};
    os << j.dump(2) << "\n";
  } else {
    for (const auto& f : rep.failures) os << "FAIL " << f << "\n";
    os << rep.suite << ": " << (rep.checks - rep.failures.size()) << "/" << rep.checks << " checks passed\n";
  }
  emit(cfg, out, os.str());
  return rep.failures.empty() ? kOk : kVerificationFailed;
}

// --- mc ----------------------------------------------------------------------

json estimate_to_json(const MCEstimate& e) {
  json j{{"group", to_string(e.group)},
         {"N", e.N},
         {"k", e.k},
         {"m", e.m},
         {"num_samples", e.num_samples},
         {"seed", e.seed},
         {"mean", e.mean},
         {"std_error", e.std_error},
         {"prediction", nullptr},
         {"ratio", nullptr},
         {"prediction_flagged", e.prediction_flagged},
         {"resamples", e.resamples},
         {"identity_max_rel_error", e.identity_max_rel_error},
         {"wall_seconds", e.wall_seconds}};
  if (e.prediction) j["prediction"] = *e.prediction;
  if (e.ratio) j["ratio"] = *e.ratio;
  return j;
}

int cmd_mc(const RunConfig& cfg, std::ostream& out) {
  const SymmetryClass group = symmetry_class_from_string(cfg.group);
  const unsigned m = cfg.m < 0 ? static_cast<unsigned>(derivative_order(group)) : static_cast<unsigned>(cfg.m);
  MCOptions options;
  options.workers = cfg.workers;
  const MCEstimate e = estimate_moment(group, cfg.N, static_cast<unsigned>(cfg.k), m, cfg.samples, cfg.seed, options);
  emit(cfg, out, estimate_to_json(e).dump(2) + "\n");
  return kOk;
}

// --- bench -------------------------------------------------------------------

std::size_t max_bits(const TruncSeries& s) {
  std::size_t bits = 0;
  for (const auto& c : s.coeffs())
    bits = std::max({bits, mpz_sizeinbase(c.get_num_mpz_t(), 2), mpz_sizeinbase(c.get_den_mpz_t(), 2)});
  return bits;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  const SymmetryClass group = symmetry_class_from_string(cfg.group);
  const int ell = tau_ell(group);
  const std::size_t k_max = cfg.k_max;

  std::vector<double> at_entry(k_max + 1, 0.0);
  const auto t0 = Clock::now();
  const TauTable table = tau_recurrence_table(k_max, ell, recurrence_base_degree(k_max), TauRetention::prefix,
                                              [&](std::size_t k) { at_entry[k] = seconds_since(t0); });
  std::vector<Rational> rec_values;
  std::vector<double> cumulative(k_max + 1, 0.0);
  for (std::size_t k = 1; k <= k_max; ++k) {
    rec_values.push_back(b_constant(group, k, table, false).value);
    cumulative[k] = seconds_since(t0);
  }
  const double total = seconds_since(t0);
  std::size_t peak_bits = 0;
  for (const auto& e : table.entries) peak_bits = std::max(peak_bits, max_bits(e));

  json j;
  j["group"] = to_string(group);
  j["k_max"] = k_max;
  j["recurrence_seconds"] = total;
  j["peak_coefficient_bits"] = peak_bits;
  j["per_k"] = json::array();
  for (std::size_t k = 1; k <= k_max; ++k)
    j["per_k"].push_back({{"k", k}, {"tau_seconds", at_entry[k]}, {"cumulative_seconds", cumulative[k]}});

  const std::size_t cap = std::min<std::size_t>(k_max, cfg.det_cap);
  bool agree = true;
  const auto t1 = Clock::now();
  for (std::size_t k = 1; k <= cap; ++k) {
    TauTable det;
    det.ell = ell;
    det.method = TauMethod::determinant;
    for (std::size_t i = 0; i <= k; ++i) {
      det.entries.push_back(i == k ? tau_det(k, ell, k) : TruncSeries(k));
      det.certified_degrees.push_back(k);
    }
    agree = agree && b_constant(group, k, det, false).value == rec_values[k - 1];
  }
  j["determinant_k_max"] = cap;
  j["determinant_seconds"] = seconds_since(t1);
  j["determinant_agrees"] = agree;

  if (cfg.format == "json") {
    emit(cfg, out, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "group " << to_string(group) << ", k_max " << k_max << "\n";
    os << "recurrence: " << total << " s, peak coefficient size " << peak_bits << " bits\n";
    for (std::size_t k = 1; k <= k_max; ++k) os << "  k=" << k << "  " << cumulative[k] << " s\n";
    os << "determinant (k <= " << cap << "): " << j["determinant_seconds"].get<double>() << " s, "
       << (agree ? "agrees" : "DISAGREES") << " with recurrence\n";
    emit(cfg, out, os.str());
  }
  return agree ? kOk : kVerificationFailed;
}

// --- ak ----------------------------------------------------------------------

int cmd_ak(const RunConfig& cfg, std::ostream& out) {
  const EulerProduct e = a_k_euler(cfg.k, cfg.cutoff, cfg.workers);
  if (cfg.format == "json") {
    json j{{"k", e.k},
           {"prime_cutoff", e.prime_cutoff},
           {"primes_used", e.primes_used},
           {"value", e.value},
           {"tail_error", e.tail_error},
           {"tail_coefficient", e.tail_coefficient}};
    emit(cfg, out, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "k: " << e.k << "\n"
       << "cutoff: " << e.prime_cutoff << " (" << e.primes_used << " primes)\n"
       << "value: " << e.value << "\n"
       << "tail_error: " << e.tail_error << "\n";
    emit(cfg, out, os.str());
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Exact moment constants and Monte Carlo checks for orthogonal and symplectic characteristic polynomials",
               "dmoments"};
  app.require_subcommand(1);
  app.add_option("--cache-dir", cfg.cache_dir, "tau table cache directory (default: $DMOMENTS_CACHE_DIR)");
  app.add_option("--out", cfg.out_path, "write output to this file instead of stdout");

  const std::vector<std::string> groups{"usp", "so", "ominus"};
  auto group_check = CLI::IsMember(groups, CLI::ignore_case);

  auto* bk = app.add_subcommand("bk", "table of leading-order constants b_k");
  bk->add_option("--group", cfg.group, "usp, so or ominus")->required()->check(group_check);
  bk->add_option("--kmax", cfg.k_max, "largest k")->required()->check(CLI::PositiveNumber);
  bk->add_option("--method", cfg.method, "recurrence or determinant")
      ->check(CLI::IsMember({"recurrence", "rec", "determinant", "det"}));
  bk->add_option("--format", cfg.format, "exact, factored, decimal, json or csv")
      ->check(CLI::IsMember({"exact", "factored", "decimal", "json", "csv"}));
  bk->add_option("--digits", cfg.digits, "significant digits for decimal output")->check(CLI::Range(1, 10000));
  bk->add_option("--factor-effort", cfg.factor_effort, "Pollard rho iteration budget per factor");

  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  verify->add_option("--suite", cfg.suite)
      ->required()
      ->check(CLI::IsMember({"paper-tables", "recurrence-vs-det", "dodgson", "bivariate", "mc-identities"}));
  verify->add_option("--seed", cfg.seed, "seed for randomized suites");
  verify->add_flag("--json", cfg.json_summary, "machine-readable summary");

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of a derivative moment");
  mc->add_option("--group", cfg.group)->required()->check(group_check);
  mc->add_option("--n", cfg.N, "half the matrix size")->required()->check(CLI::PositiveNumber);
  mc->add_option("--k", cfg.k, "moment")->required()->check(CLI::PositiveNumber);
  mc->add_option("--m", cfg.m, "derivative order (default: 2 for so/usp, 3 for ominus)")->check(CLI::NonNegativeNumber);
  mc->add_option("--samples", cfg.samples)->required()->check(CLI::PositiveNumber);
  mc->add_option("--seed", cfg.seed)->required();
  mc->add_option("--workers", cfg.workers)->check(CLI::PositiveNumber);

  auto* bench = app.add_subcommand("bench", "time the recurrence and determinant paths");
  bench->add_option("--kmax", cfg.k_max)->required()->check(CLI::PositiveNumber);
  bench->add_option("--group", cfg.group)->check(group_check);
  bench->add_option("--det-kmax", cfg.det_cap, "largest k for the determinant comparison");
  bench->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  bench->callback([&] {
    if (cfg.format != "json") cfg.format = "text";
  });

  auto* ak = app.add_subcommand("ak", "truncated Euler product for the arithmetic factor");
  ak->add_option("--k", cfg.k)->required()->check(CLI::PositiveNumber);
  ak->add_option("--cutoff", cfg.cutoff, "largest prime included")->check(CLI::Range(2UL, 2000000000UL));
  ak->add_option("--workers", cfg.workers)->check(CLI::PositiveNumber);
  ak->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*bk) return cmd_bk(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
    if (*mc) return cmd_mc(cfg, out);
    if (*bench) return cmd_bench(cfg, out);
    if (*ak) return cmd_ak(cfg, out);
  } catch (const PrecisionError& e) {
    err << "error: " << e.what() << "\n";
    return kPrecision;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kVerificationFailed;
  }
  return kUsage;
}

}  // namespace dmoments::cli
