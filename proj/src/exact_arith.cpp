#include "dmoments/exact_arith.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <shared_mutex>

namespace dmoments {

namespace {

class FactorialTable {
 public:
  BigInteger get(unsigned n) {
    {
      std::shared_lock lock(mutex_);
      if (n < table_.size()) return table_[n];
    }
    std::unique_lock lock(mutex_);
    table_.reserve(n + 1);
    while (table_.size() <= n) {
      BigInteger next = table_.back() * static_cast<unsigned long>(table_.size());
      table_.push_back(std::move(next));
    }
    return table_[n];
  }

 private:
  std::shared_mutex mutex_;
  std::vector<BigInteger> table_{BigInteger(1)};
};

FactorialTable& factorial_table() {
  static FactorialTable table;
  return table;
}

constexpr unsigned kTrialBound = 10000;

const std::vector<unsigned>& small_primes() {
  static const std::vector<unsigned> primes = [] {
    std::vector<bool> composite(kTrialBound + 1, false);
    std::vector<unsigned> out;
    for (unsigned p = 2; p <= kTrialBound; ++p) {
      if (composite[p]) continue;
      out.push_back(p);
      for (unsigned long q = static_cast<unsigned long>(p) * p; q <= kTrialBound; q += p) composite[q] = true;
    }
    return out;
  }();
  return primes;
}

// Pollard-Brent rho. Returns a nontrivial factor or 0 if the budget ran out.
BigInteger rho_split(const BigInteger& n, std::uint64_t budget) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1; c < 20 && budget > 0; ++c) {
    BigInteger y = 2, x, ys, q = 1, g = 1, tmp;
    std::uint64_t r = 1;
    const std::uint64_t m = 128;
    auto f = [&](BigInteger& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          f(y);
          tmp = abs(x - y);
          q = q * tmp;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
        budget = budget > m ? budget - m : 0;
      } while (k < r && g == 1 && budget > 0);
      r *= 2;
    } while (g == 1 && budget > 0);
    if (g == n) {
      // Backtrack one step at a time from the last saved point.
      do {
        f(ys);
        tmp = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), tmp.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return 0;
}

void split_into(const BigInteger& n, std::uint64_t budget, std::map<BigInteger, unsigned>& primes,
                BigInteger& cofactor) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    ++primes[n];
    return;
  }
  // Perfect powers defeat rho's cycle detection surprisingly often; peel them first.
  for (unsigned long e = 2; e < 64; ++e) {
    BigInteger root;
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e) != 0) {
      std::map<BigInteger, unsigned> sub;
      BigInteger sub_co = 1;
      split_into(root, budget, sub, sub_co);
      for (auto& [p, k] : sub) primes[p] += k * static_cast<unsigned>(e);
      for (unsigned long i = 0; i < e; ++i) cofactor *= sub_co;
      return;
    }
    if (mpz_sizeinbase(n.get_mpz_t(), 2) / e < 2) break;
  }
  BigInteger d = rho_split(n, budget);
  if (d == 0) {
    cofactor *= n;
    return;
  }
  split_into(d, budget, primes, cofactor);
  split_into(BigInteger(n / d), budget, primes, cofactor);
}

}  // namespace

BigInteger factorial(unsigned n) { return factorial_table().get(n); }

BigInteger binomial(unsigned n, unsigned k) {
  BigInteger out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Rational make_rational(const BigInteger& num, const BigInteger& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(long num, long den) { return make_rational(BigInteger(num), BigInteger(den)); }

std::string to_string(const Rational& q) { return q.get_str(10); }
std::string to_string(const BigInteger& n) { return n.get_str(10); }

BigInteger parse_integer(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size() ||
      !std::all_of(s.begin() + static_cast<long>(start), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw std::invalid_argument("malformed integer: " + s);
  if (s[0] == '+') s.erase(0, 1);
  return BigInteger(s, 10);
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  return make_rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
}

bool is_probable_prime(const BigInteger& n, int rounds) {
  return mpz_probab_prime_p(n.get_mpz_t(), std::max(rounds, 30)) > 0;
}

BigInteger FactoredInteger::reassemble() const {
  BigInteger out = cofactor;
  for (const auto& pp : factors) {
    BigInteger power;
    mpz_pow_ui(power.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
    out *= power;
  }
  return out;
}

Rational FactoredRational::reassemble() const {
  if (is_zero) return Rational(0);
  Rational q = make_rational(numerator.reassemble(), denominator.reassemble());
  return sign < 0 ? Rational(-q) : q;
}

FactoredInteger factor_integer(const BigInteger& n_in, std::uint64_t effort_bound) {
  if (n_in <= 0) throw std::invalid_argument("factor_integer expects a positive integer");
  FactoredInteger out;
  BigInteger n = n_in;
  std::map<BigInteger, unsigned> primes;
  for (unsigned p : small_primes()) {
    if (n == 1) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++primes[BigInteger(p)];
    }
  }
  split_into(n, effort_bound, primes, out.cofactor);
  for (auto& [p, e] : primes) out.factors.push_back({p, e});
  return out;
}

FactoredRational factor_rational(const Rational& q, std::uint64_t effort_bound) {
  FactoredRational out;
  if (q == 0) {
    out.is_zero = true;
    out.sign = 0;
    return out;
  }
  out.sign = sgn(q) < 0 ? -1 : 1;
  out.numerator = factor_integer(abs(q.get_num()), effort_bound);
  out.denominator = factor_integer(q.get_den(), effort_bound);
  return out;
}

namespace {

std::string render(const FactoredInteger& f, bool& multiple) {
  std::vector<std::string> parts;
  for (const auto& pp : f.factors) {
    std::string s = pp.prime.get_str(10);
    if (pp.exponent > 1) s += "^" + std::to_string(pp.exponent);
    parts.push_back(std::move(s));
  }
  if (f.cofactor != 1) parts.push_back("[" + f.cofactor.get_str(10) + "]");
  if (parts.empty()) parts.emplace_back("1");
  multiple = parts.size() > 1;
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " * ";
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string format_factored(const FactoredRational& f) {
  if (f.is_zero) return "0";
  bool num_multi = false, den_multi = false;
  std::string num = render(f.numerator, num_multi);
  std::string out = f.sign < 0 ? "-" : "";
  bool den_is_one = f.denominator.factors.empty() && f.denominator.cofactor == 1;
  if (den_is_one) return out + num;
  std::string den = render(f.denominator, den_multi);
  out += num_multi ? "(" + num + ")" : num;
  out += " / ";
  out += den_multi ? "(" + den + ")" : den;
  return out;
}

}  // namespace dmoments
