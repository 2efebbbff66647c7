#pragma once

// Exact integers and rationals (GMP-backed), a shared factorial table, and
// best-effort factorization for display of large rational constants.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dmoments {

using BigInteger = mpz_class;
/// Always kept canonical: denominator > 0, gcd(num, den) == 1.
using Rational = mpq_class;

/// Raised when a computation would need more series terms than are certified.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a series division meets a divisor with zero constant term.
class NonUnitDivisor : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// n!, served from a process-wide growable table. Thread-safe.
BigInteger factorial(unsigned n);

BigInteger binomial(unsigned n, unsigned k);

Rational make_rational(const BigInteger& num, const BigInteger& den);
Rational make_rational(long num, long den = 1);

/// "num/den", or just "num" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const BigInteger& n);

/// Accepts "num/den" or "num"; throws std::invalid_argument on malformed
/// input or a zero denominator.
Rational parse_rational(std::string_view text);
BigInteger parse_integer(std::string_view text);

/// Miller-Rabin with at least 30 rounds.
bool is_probable_prime(const BigInteger& n, int rounds = 30);

struct PrimePower {
  BigInteger prime;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct FactoredInteger {
  std::vector<PrimePower> factors;  // ascending by prime
  BigInteger cofactor = 1;          // unfactored residue, 1 when complete

  BigInteger reassemble() const;
  bool complete() const { return cofactor == 1; }
};

/// Factorization of a nonzero rational. Zero is represented with
/// `is_zero = true` and empty factor lists.
struct FactoredRational {
  int sign = 1;
  bool is_zero = false;
  FactoredInteger numerator;
  FactoredInteger denominator;

  Rational reassemble() const;
  bool complete() const { return numerator.complete() && denominator.complete(); }
};

/// Trial division by small primes, then Pollard-Brent rho with at most
/// `effort_bound` iterations per split attempt. Whatever resists lands in the
/// cofactor.
FactoredInteger factor_integer(const BigInteger& n, std::uint64_t effort_bound = 200000);
FactoredRational factor_rational(const Rational& q, std::uint64_t effort_bound = 200000);

/// ASCII rendering, e.g. "19 / (2^4 * 3^2 * 5 * 7)". Unfactored cofactors are
/// shown in brackets.
std::string format_factored(const FactoredRational& f);

}  // namespace dmoments
