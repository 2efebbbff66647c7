#include "dmoments/tau.hpp"

#include "dmoments/special_functions.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dmoments {

std::string to_string(TauMethod m) { return m == TauMethod::determinant ? "determinant" : "recurrence"; }

TauMethod tau_method_from_string(const std::string& s) {
  if (s == "determinant" || s == "det") return TauMethod::determinant;
  if (s == "recurrence" || s == "rec") return TauMethod::recurrence;
  throw std::invalid_argument("unknown method: " + s);
}

namespace {

// Generic cofactor expansion with memoisation over column subsets:
// det = Σ over rows top-down, state = set of columns already used.
template <typename T, typename MakeZero>
T laplace_determinant(const std::vector<std::vector<T>>& a, const T& one, MakeZero make_zero) {
  const std::size_t n = a.size();
  if (n == 0) return one;
  if (n > 20) throw std::invalid_argument("cofactor expansion limited to 20x20");
  // minor[mask] = det of rows (n - popcount(mask) .. n-1) against columns in mask.
  std::vector<std::optional<T>> memo(std::size_t{1} << n);
  memo[0] = one;
  for (std::size_t mask = 1; mask < memo.size(); ++mask) {
    const auto used = static_cast<std::size_t>(__builtin_popcountll(mask));
    const std::size_t row = n - used;
    T acc = make_zero();
    std::size_t position = 0;  // rank of column within mask, for the sign
    for (std::size_t c = 0; c < n; ++c) {
      if (!(mask >> c & 1U)) continue;
      const T& rest = *memo[mask & ~(std::size_t{1} << c)];
      if (position % 2 == 0)
        acc = acc + a[row][c] * rest;
      else
        acc = acc - a[row][c] * rest;
      ++position;
    }
    memo[mask] = std::move(acc);
  }
  return *memo.back();
}

using SeriesMatrix = std::vector<std::vector<TruncSeries>>;

TruncSeries series_determinant(SeriesMatrix m, std::size_t degree) {
  const std::size_t n = m.size();
  TruncSeries result = TruncSeries::constant(1, degree);
  bool negate = false;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = n;
    for (std::size_t r = c; r < n; ++r)
      if (m[r][c][0] != 0) {
        pivot = r;
        break;
      }
    if (pivot == n) {
      // No unit in this column: expand the remaining block along it.
      TruncSeries sub(degree);
      for (std::size_t r = c; r < n; ++r) {
        bool all_zero = std::all_of(m[r][c].coeffs().begin(), m[r][c].coeffs().end(),
                                    [](const Rational& q) { return q == 0; });
        if (all_zero) continue;
        SeriesMatrix minor;
        for (std::size_t rr = c; rr < n; ++rr) {
          if (rr == r) continue;
          std::vector<TruncSeries> row;
          for (std::size_t cc = c + 1; cc < n; ++cc) row.push_back(m[rr][cc]);
          minor.push_back(std::move(row));
        }
        TruncSeries term = m[r][c] * series_determinant(std::move(minor), degree);
        sub = ((r - c) % 2 == 0) ? sub + term : sub - term;
      }
      result = result * sub;
      break;
    }
    if (pivot != c) {
      std::swap(m[pivot], m[c]);
      negate = !negate;
    }
    result = result * m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::all_of(m[r][c].coeffs().begin(), m[r][c].coeffs().end(), [](const Rational& q) { return q == 0; }))
        continue;
      const TruncSeries factor = m[r][c] / m[c][c];
      for (std::size_t cc = c + 1; cc < n; ++cc) m[r][cc] = m[r][cc] - factor * m[c][cc];
    }
  }
  return negate ? -result : result;
}

// --- scaled representation for the fast path --------------------------------
//
// A series stored as integer numerators over one shared positive denominator.
// Products then need no gcd at all; reduction happens once per coefficient in
// the division and once per series afterwards.

struct ScaledSeries {
  std::vector<BigInteger> num;
  BigInteger den = 1;

  std::size_t degree() const { return num.size() - 1; }
};

ScaledSeries to_scaled(const TruncSeries& s) {
  ScaledSeries out;
  for (const auto& c : s.coeffs()) mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), c.get_den_mpz_t());
  out.num.reserve(s.degree() + 1);
  for (const auto& c : s.coeffs()) {
    BigInteger v;
    mpz_divexact(v.get_mpz_t(), out.den.get_mpz_t(), c.get_den_mpz_t());
    v *= c.get_num();
    out.num.push_back(std::move(v));
  }
  return out;
}

TruncSeries from_scaled(const ScaledSeries& s, std::size_t degree) {
  degree = std::min(degree, s.degree());
  std::vector<Rational> coeffs;
  coeffs.reserve(degree + 1);
  for (std::size_t n = 0; n <= degree; ++n) coeffs.push_back(make_rational(s.num[n], s.den));
  return TruncSeries(std::move(coeffs));
}

void reduce_content(ScaledSeries& s) {
  BigInteger g = s.den;
  for (const auto& v : s.num) {
    if (g == 1) return;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  if (g == 1) return;
  mpz_divexact(s.den.get_mpz_t(), s.den.get_mpz_t(), g.get_mpz_t());
  for (auto& v : s.num) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
}

// Σ_{i+j=N} (i−j)² a_i a_j sits at u^{N−1}; this is 2(uTT'' + TT' − uT'²)
// written as one symmetric convolution.
ScaledSeries scaled_rhs(const ScaledSeries& t) {
  const std::size_t d = t.degree();
  ScaledSeries out;
  out.den = t.den * t.den;
  out.num.assign(d, BigInteger(0));
  BigInteger prod;
  for (std::size_t total = 1; total <= d; ++total) {
    BigInteger& acc = out.num[total - 1];
    for (std::size_t i = 0; 2 * i < total; ++i) {
      const std::size_t j = total - i;
      if (t.num[i] == 0 || t.num[j] == 0) continue;
      const unsigned long gap = j - i;
      mpz_mul(prod.get_mpz_t(), t.num[i].get_mpz_t(), t.num[j].get_mpz_t());
      mpz_addmul_ui(acc.get_mpz_t(), prod.get_mpz_t(), 2 * gap * gap);
    }
  }
  reduce_content(out);
  return out;
}

std::size_t valuation(const ScaledSeries& s) {
  std::size_t v = 0;
  while (v <= s.degree() && s.num[v] == 0) ++v;
  return v;
}

// Exact quotient a / b. If b = u^v·b' with b'(0) ≠ 0, the first v coefficients
// of a must vanish and v degrees of certification are spent.
ScaledSeries scaled_divide(const ScaledSeries& a, const ScaledSeries& b) {
  const std::size_t v = valuation(b);
  const std::size_t d_in = std::min(a.degree(), b.degree());
  if (v > d_in) throw PrecisionError("insufficient precision: divisor vanishes to its whole certified degree");
  for (std::size_t n = 0; n < v; ++n)
    if (a.num[n] != 0) throw NonUnitDivisor("non-unit divisor: dividend is not divisible by u^" + std::to_string(v));
  const std::size_t d = d_in - v;
  const BigInteger& lead = b.num[v];

  // Quotient of the integer series, held as P_i / common.
  std::vector<BigInteger> p;
  p.reserve(d + 1);
  BigInteger common = 1, s, num, den, g, grow;
  for (std::size_t n = 0; n <= d; ++n) {
    s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const BigInteger& bi = b.num[v + n - i];
      if (bi != 0) mpz_addmul(s.get_mpz_t(), p[i].get_mpz_t(), bi.get_mpz_t());
    }
    num = a.num[v + n] * common - s;
    den = common * lead;
    if (den < 0) {
      den = -den;
      num = -num;
    }
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 1) {
      mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), g.get_mpz_t());
    }
    // grow = lcm(common, den) / common
    mpz_gcd(g.get_mpz_t(), common.get_mpz_t(), den.get_mpz_t());
    mpz_divexact(grow.get_mpz_t(), den.get_mpz_t(), g.get_mpz_t());
    if (grow != 1) {
      for (auto& pi : p) pi *= grow;
      common *= grow;
    }
    mpz_divexact(g.get_mpz_t(), common.get_mpz_t(), den.get_mpz_t());
    p.push_back(num * g);
  }

  // (P / common) · (b.den / a.den)
  ScaledSeries out;
  out.num = std::move(p);
  out.den = common * a.den;
  for (auto& pi : out.num) pi *= b.den;
  reduce_content(out);
  return out;
}

}  // namespace

TruncSeries recurrence_rhs(const TruncSeries& t) {
  if (t.degree() == 0) throw PrecisionError("insufficient precision: recurrence needs degree >= 1");
  return from_scaled(scaled_rhs(to_scaled(t)), t.degree() - 1);
}

TruncSeries tau_det(std::size_t k, int ell, std::size_t degree) {
  if (k == 0) return TruncSeries::constant(1, degree);
  SeriesMatrix m(k, std::vector<TruncSeries>(k));
  for (std::size_t i = 1; i <= k; ++i)
    for (std::size_t j = 1; j <= k; ++j)
      m[i - 1][j - 1] = g_series(2 * static_cast<int>(i) - static_cast<int>(j) + ell, degree);
  return series_determinant(std::move(m), degree);
}

TauTable tau_recurrence_table(std::size_t k_max, int ell, std::size_t base_degree, TauRetention retention,
                              const std::function<void(std::size_t)>& on_entry) {
  if (k_max == 0) throw std::invalid_argument("k_max must be positive");
  if (base_degree < recurrence_base_degree(k_max))
    throw std::invalid_argument("base_degree must be at least 2*k_max - 1 = " +
                                std::to_string(recurrence_base_degree(k_max)));
  auto keep = [&](const ScaledSeries& s, std::size_t k) {
    return from_scaled(s, retention == TauRetention::prefix ? k : s.degree());
  };

  TauTable table;
  table.ell = ell;
  table.method = TauMethod::recurrence;

  ScaledSeries previous;
  previous.num.assign(base_degree + 1, BigInteger(0));
  previous.num[0] = 1;
  ScaledSeries current = to_scaled(g_series(1 + ell, base_degree));

  table.entries.push_back(keep(previous, 0));
  table.certified_degrees.push_back(base_degree);
  table.entries.push_back(keep(current, 1));
  table.certified_degrees.push_back(base_degree);
  if (on_entry) {
    on_entry(0);
    on_entry(1);
  }

  for (std::size_t k = 1; k < k_max; ++k) {
    if (current.degree() == 0)
      throw PrecisionError("insufficient precision: certified degree exhausted at k = " + std::to_string(k));
    ScaledSeries next = scaled_divide(scaled_rhs(current), previous);
    table.entries.push_back(keep(next, k + 1));
    table.certified_degrees.push_back(next.degree());
    if (on_entry) on_entry(k + 1);
    previous = std::move(current);
    current = std::move(next);
  }
  return table;
}

TauTable tau_determinant_table(std::size_t k_max, int ell, std::size_t degree) {
  TauTable table;
  table.ell = ell;
  table.method = TauMethod::determinant;
  for (std::size_t k = 0; k <= k_max; ++k) {
    table.entries.push_back(tau_det(k, ell, degree));
    table.certified_degrees.push_back(degree);
  }
  return table;
}

Rational cofactor_determinant(const RationalMatrix& a) {
  for (const auto& row : a)
    if (row.size() != a.size()) throw std::invalid_argument("matrix is not square");
  return laplace_determinant<Rational>(a, Rational(1), [] { return Rational(0); });
}

namespace {

RationalMatrix remove(const RationalMatrix& a, std::initializer_list<std::size_t> rows,
                      std::initializer_list<std::size_t> cols) {
  RationalMatrix out;
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (std::find(rows.begin(), rows.end(), r) != rows.end()) continue;
    std::vector<Rational> row;
    for (std::size_t c = 0; c < a.size(); ++c)
      if (std::find(cols.begin(), cols.end(), c) == cols.end()) row.push_back(a[r][c]);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

bool dodgson_identity_holds(const RationalMatrix& a, std::size_t i, std::size_t j) {
  if (a.size() < 2 || i == j || i >= a.size() || j >= a.size())
    throw std::invalid_argument("dodgson identity needs size >= 2 and distinct indices in range");
  const Rational lhs = cofactor_determinant(remove(a, {i}, {i})) * cofactor_determinant(remove(a, {j}, {j})) -
                       cofactor_determinant(remove(a, {i}, {j})) * cofactor_determinant(remove(a, {j}, {i}));
  const Rational rhs = cofactor_determinant(a) * cofactor_determinant(remove(a, {i, j}, {i, j}));
  return lhs == rhs;
}

bool dodgson_check(const RationalMatrix& a, std::uint64_t seed) {
  const std::size_t n = a.size();
  if (!dodgson_identity_holds(a, 0, n - 1)) return false;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t i = pick(rng), j = pick(rng);
  while (j == i) j = pick(rng);
  return dodgson_identity_holds(a, i, j);
}

BivariateTruncSeries bivariate_tau(std::size_t k, int ell, std::size_t deg_x, std::size_t deg_y) {
  BivariateTruncSeries one(deg_x, deg_y);
  one(0, 0) = 1;
  std::vector<std::vector<BivariateTruncSeries>> m;
  for (std::size_t i = 1; i <= k; ++i) {
    std::vector<BivariateTruncSeries> row;
    for (std::size_t j = 1; j <= k; ++j)
      row.push_back(g_bivariate(2 * static_cast<int>(i) - static_cast<int>(j) + ell, deg_x, deg_y));
    m.push_back(std::move(row));
  }
  return laplace_determinant<BivariateTruncSeries>(m, one, [&] { return BivariateTruncSeries(deg_x, deg_y); });
}

BivariateTruncSeries tau_specialized(const TruncSeries& tau, std::size_t k, int ell, std::size_t deg_x,
                                     std::size_t deg_y) {
  const long kk = static_cast<long>(k);
  const long exponent = kk * (kk + 1) / 2 + kk * ell;
  if (exponent < 0) throw std::domain_error("x exponent k(k+1)/2 + k*ell is negative");
  BivariateTruncSeries out(deg_x, deg_y);
  for (std::size_t b = 0; b <= std::min(deg_y, tau.degree()); ++b) {
    const auto a = static_cast<std::size_t>(exponent) + 2 * b;
    if (a <= deg_x) out(a, b) = tau[b];
  }
  return out;
}

// --- cache ------------------------------------------------------------------

std::string content_hash(const std::string& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return "fnv1a64:" + os.str();
}

nlohmann::json to_json(const TauTable& table) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : table.entries) entries.push_back(to_json(e));
  nlohmann::json payload = {{"ell", table.ell},
                            {"method", to_string(table.method)},
                            {"entries", std::move(entries)},
                            {"certified_degrees", table.certified_degrees}};
  payload["hash"] = content_hash(payload.dump());
  return payload;
}

TauTable tau_table_from_json(const nlohmann::json& j) {
  nlohmann::json payload = j;
  const auto stored = payload.at("hash").get<std::string>();
  payload.erase("hash");
  if (content_hash(payload.dump()) != stored) throw std::runtime_error("tau cache: content hash mismatch");
  TauTable table;
  table.ell = payload.at("ell").get<int>();
  table.method = tau_method_from_string(payload.at("method").get<std::string>());
  for (const auto& e : payload.at("entries")) table.entries.push_back(series_from_json(e));
  table.certified_degrees = payload.at("certified_degrees").get<std::vector<std::size_t>>();
  if (table.certified_degrees.size() != table.entries.size())
    throw std::runtime_error("tau cache: entries and certified_degrees differ in length");
  return table;
}

TauCache::TauCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::optional<TauCache> TauCache::from_environment() {
  const char* env = std::getenv("DMOMENTS_CACHE_DIR");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return TauCache(env);
}

std::filesystem::path TauCache::path_for(int ell, std::size_t k_max, std::size_t base_degree,
                                         TauRetention retention) const {
  std::ostringstream name;
  name << "tau_ell" << ell << "_k" << k_max << "_d" << base_degree
       << (retention == TauRetention::prefix ? "_prefix" : "_full") << ".json";
  return dir_ / name.str();
}

std::optional<TauTable> TauCache::load(int ell, std::size_t k_max, std::size_t base_degree,
                                       TauRetention retention) const {
  const auto path = path_for(ell, k_max, base_degree, retention);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    return tau_table_from_json(nlohmann::json::parse(in));
  } catch (const std::exception&) {
    // A corrupt or stale file is treated as a miss and will be overwritten.
    return std::nullopt;
  }
}

void TauCache::store(const TauTable& table, std::size_t base_degree, TauRetention retention) const {
  std::filesystem::create_directories(dir_);
  const auto path = path_for(table.ell, table.k_max(), base_degree, retention);
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    out << to_json(table).dump();
  }
  std::filesystem::rename(tmp, path);
}

TauTable TauCache::recurrence_table(std::size_t k_max, int ell, std::size_t base_degree,
                                    TauRetention retention) const {
  if (auto hit = load(ell, k_max, base_degree, retention)) return *std::move(hit);
  TauTable table = tau_recurrence_table(k_max, ell, base_degree, retention);
  store(table, base_degree, retention);
  return table;
}

}  // namespace dmoments
