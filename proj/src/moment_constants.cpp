#include "dmoments/moment_constants.hpp"

#include "dmoments/power_series.hpp"
#include "dmoments/special_functions.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

namespace dmoments {

namespace mp = boost::multiprecision;
using Real = mp::number<mp::mpfr_float_backend<60>>;

std::string to_string(SymmetryClass g) {
  switch (g) {
    case SymmetryClass::USp: return "usp";
    case SymmetryClass::SO: return "so";
    case SymmetryClass::OMinus: return "ominus";
  }
  return "?";
}

SymmetryClass symmetry_class_from_string(const std::string& s) {
  std::string low;
  for (char c : s) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (low == "usp" || low == "sp" || low == "symplectic") return SymmetryClass::USp;
  if (low == "so" || low == "so+" || low == "orthogonal") return SymmetryClass::SO;
  if (low == "ominus" || low == "o-" || low == "ominus2n") return SymmetryClass::OMinus;
  throw std::invalid_argument("unknown symmetry class: " + s);
}

int derivative_order(SymmetryClass g) { return g == SymmetryClass::OMinus ? 3 : 2; }

int tau_ell(SymmetryClass g) { return g == SymmetryClass::SO ? -1 : 0; }

unsigned long exponent_of_2N(SymmetryClass g, unsigned long k) {
  return g == SymmetryClass::SO ? (k * k + 3 * k) / 2 : (k * k + 5 * k) / 2;
}

Rational prefactor(SymmetryClass g, unsigned long k) {
  unsigned long two_power = 0;
  Rational scale = 1;
  switch (g) {
    case SymmetryClass::USp: two_power = (k * k + 5 * k) / 2; break;
    case SymmetryClass::SO: two_power = (k * k + k) / 2; break;
    case SymmetryClass::OMinus:
      two_power = (k * k + 3 * k) / 2;
      scale = 3;
      break;
  }
  BigInteger den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, two_power);
  return scale / Rational(den);
}

BkRecord b_constant(SymmetryClass group, unsigned long k, const TauTable& table, bool factor) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (table.ell != tau_ell(group))
    throw std::invalid_argument("tau table has ell = " + std::to_string(table.ell) + ", " + to_string(group) +
                                " needs " + std::to_string(tau_ell(group)));
  if (k > table.k_max())
    throw PrecisionError("insufficient precision: tau table stops at k = " + std::to_string(table.k_max()));
  const TruncSeries& tau = table.entries[k];
  if (tau.degree() < k || table.certified_degrees[k] < k)
    throw PrecisionError("insufficient precision: entry " + std::to_string(k) + " certified to degree " +
                         std::to_string(std::min(tau.degree(), table.certified_degrees[k])));
  const TruncSeries shifted = exp_series(k) * scale_argument(tau.truncated(k), Rational(2));
  BkRecord rec;
  rec.group = group;
  rec.k = k;
  rec.method = table.method;
  rec.value = prefactor(group, k) * kth_derivative_at_zero(shifted, k);
  if (factor) rec.factored = factor_rational(rec.value);
  return rec;
}

std::vector<BkRecord> bk_table(SymmetryClass group, unsigned long k_max, TauMethod method,
                               const BkTableOptions& options) {
  if (k_max == 0) throw std::invalid_argument("k_max must be positive");
  const int ell = tau_ell(group);
  TauTable table;
  if (method == TauMethod::recurrence) {
    const std::size_t base = recurrence_base_degree(k_max);
    table = options.cache ? options.cache->recurrence_table(k_max, ell, base, TauRetention::prefix)
                          : tau_recurrence_table(k_max, ell, base, TauRetention::prefix);
  } else {
    table.ell = ell;
    table.method = TauMethod::determinant;
    for (unsigned long k = 0; k <= k_max; ++k) {
      table.entries.push_back(tau_det(k, ell, k));
      table.certified_degrees.push_back(k);
    }
  }
  std::vector<BkRecord> out;
  out.reserve(k_max);
  for (unsigned long k = 1; k <= k_max; ++k) {
    BkRecord rec = b_constant(group, k, table, false);
    if (options.factor) rec.factored = factor_rational(rec.value, options.factor_effort);
    out.push_back(std::move(rec));
  }
  return out;
}

Rational moment_asymptotic_exact(SymmetryClass group, unsigned long k, unsigned long N, const Rational& b_k) {
  BigInteger power;
  mpz_ui_pow_ui(power.get_mpz_t(), 2 * N, exponent_of_2N(group, k));
  return b_k * Rational(power);
}

Rational moment_asymptotic(SymmetryClass group, unsigned long k, unsigned long N) {
  BkTableOptions options;
  options.factor = false;
  const auto table = bk_table(group, k, TauMethod::recurrence, options);
  return moment_asymptotic_exact(group, k, N, table.back().value);
}

std::string to_decimal(const Rational& q, int digits) {
  if (digits < 1) digits = 1;
  if (q == 0) return "0";
  const bool negative = sgn(q) < 0;
  const Rational a = abs(q);
  // Estimate the decimal exponent, then correct by at most one.
  long e = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), 10));
  BigInteger scaled;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const long shift = digits - 1 - e;
    BigInteger ten;
    mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
    Rational s = shift >= 0 ? Rational(a * ten) : Rational(a / ten);
    // round half up
    BigInteger num = s.get_num() * 2 + s.get_den();
    BigInteger den = s.get_den() * 2;
    mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    const auto len = static_cast<long>(scaled.get_str(10).size());
    if (len == digits) break;
    e += (len > digits) ? 1 : -1;
  }
  std::string mant = scaled.get_str(10);
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
  std::string out = negative ? "-" : "";
  if (e >= 0 && e < digits) {
    if (mant.size() < static_cast<std::size_t>(e) + 1) mant.resize(static_cast<std::size_t>(e) + 1, '0');
    out += mant.substr(0, static_cast<std::size_t>(e) + 1);
    if (static_cast<std::size_t>(e) + 1 < mant.size()) out += "." + mant.substr(static_cast<std::size_t>(e) + 1);
  } else if (e < 0 && e >= -5) {
    out += "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + mant;
  } else {
    out += mant.substr(0, 1);
    if (mant.size() > 1) out += "." + mant.substr(1);
    out += "e" + std::to_string(e);
  }
  return out;
}

double to_double(const Rational& q) {
  return mpq_get_d(q.get_mpq_t());
}

// --- Euler product ----------------------------------------------------------

std::vector<unsigned long> primes_up_to(unsigned long n) {
  std::vector<unsigned long> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (unsigned long p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (unsigned long q = p * p; q <= n; q += p) composite[q] = true;
  }
  return out;
}

namespace {

Real factor_value(unsigned long k, unsigned long p) {
  const Real inv_p = Real(1) / Real(p);
  const Real inv_sqrt = mp::sqrt(inv_p);
  const auto kk = static_cast<long>(k);
  const Real lead = mp::pow(Real(1) - inv_p, kk * (kk + 1) / 2) / (Real(1) + inv_p);
  const Real bracket = (mp::pow(Real(1) - inv_sqrt, -kk) + mp::pow(Real(1) + inv_sqrt, -kk)) / 2 + inv_p;
  return lead * bracket;
}

std::string render(const Real& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

// Series of the per-prime factor in x = p^{-1/2}, exact, up to x^6.
TruncSeries factor_series_in_x(unsigned long k) {
  constexpr std::size_t d = 6;
  const unsigned long half = k * (k + 1) / 2;
  TruncSeries one_minus_x2_pow(d), inv_one_plus_x2(d), bracket(d);
  for (std::size_t n = 0; 2 * n <= d; ++n) {
    Rational c(binomial(static_cast<unsigned>(half), static_cast<unsigned>(n)));
    one_minus_x2_pow[2 * n] = (n % 2 == 0) ? c : Rational(-c);
    inv_one_plus_x2[2 * n] = (n % 2 == 0) ? Rational(1) : Rational(-1);
  }
  // ((1−x)^{−k} + (1+x)^{−k})/2 keeps the even terms of Σ C(k+n−1, n) x^n.
  for (std::size_t n = 0; n <= d; n += 2)
    bracket[n] = Rational(binomial(static_cast<unsigned>(k + n - 1), static_cast<unsigned>(n)));
  bracket[2] += 1;
  return one_minus_x2_pow * inv_one_plus_x2 * bracket;
}

}  // namespace

Rational euler_tail_coefficient(unsigned long k) { return factor_series_in_x(k)[4]; }

std::string euler_factor(unsigned long k, unsigned long p) { return render(factor_value(k, p), 50); }

EulerProduct a_k_euler(unsigned long k, unsigned long prime_cutoff, unsigned workers) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (prime_cutoff < 2) throw std::invalid_argument("prime_cutoff must be at least 2");
  const auto primes = primes_up_to(prime_cutoff);
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (primes.size() + kBlock - 1) / kBlock;
  std::vector<Real> partial(blocks, Real(1));
  auto run_block = [&](std::size_t b) {
    Real acc = 1;
    const std::size_t end = std::min(primes.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) acc *= factor_value(k, primes[i]);
    partial[b] = acc;
  };
  workers = std::max(1U, workers);
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w)
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t b = w; b < blocks; b += workers) run_block(b);
      }));
    for (auto& j : jobs) j.get();
  }
  Real product = 1;
  for (const auto& p : partial) product *= p;

  const TruncSeries series = factor_series_in_x(k);
  const double c4 = std::abs(to_double(series[4]));
  const double c6 = std::abs(to_double(series[6]));
  const auto cutoff = static_cast<double>(prime_cutoff);
  // Σ_{n > P} n^{-2} < 1/P bounds the omitted log-factors C4/p² + C6/p³ + …
  const double tail = (c4 + c6 / cutoff) / cutoff;

  EulerProduct out;
  out.k = k;
  out.prime_cutoff = prime_cutoff;
  out.primes_used = primes.size();
  out.value = render(product, 50);
  out.value_double = product.convert_to<double>();
  out.tail_error_double = tail;
  out.tail_coefficient = to_double(series[4]);
  std::ostringstream os;
  os.precision(6);
  os << tail;
  out.tail_error = os.str();
  return out;
}

}  // namespace dmoments
