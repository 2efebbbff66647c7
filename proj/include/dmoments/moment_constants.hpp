#pragma once

// Leading constants b_k in M_k(G(2N), m) ~ b_k · (2N)^{e(k)} for the three
// symmetry classes, and the arithmetic Euler product a_k.

#include "dmoments/exact_arith.hpp"
#include "dmoments/tau.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dmoments {

enum class SymmetryClass { USp, SO, OMinus };

std::string to_string(SymmetryClass g);
/// Accepts "usp", "so", "ominus" (case-insensitive) plus a few spellings
/// such as "o-" and "sp".
SymmetryClass symmetry_class_from_string(const std::string& s);

/// Which derivative Λ^{(m)}(1) the class is about: 2 for USp and SO, 3 for O⁻.
int derivative_order(SymmetryClass g);
/// Shift l in T_{k,l}: 0 for USp and O⁻, −1 for SO.
int tau_ell(SymmetryClass g);
/// e(k) in (2N)^{e(k)}.
unsigned long exponent_of_2N(SymmetryClass g, unsigned long k);
/// 2^{-(k²+5k)/2}, 2^{-(k²+k)/2}, 3·2^{-(k²+3k)/2}.
Rational prefactor(SymmetryClass g, unsigned long k);

struct BkRecord {
  SymmetryClass group = SymmetryClass::USp;
  unsigned long k = 0;
  Rational value;
  FactoredRational factored;
  TauMethod method = TauMethod::recurrence;
};

/// prefactor · d^k/du^k [e^u · T_{k,l}(2u)] at u = 0, read from `table`.
/// Throws std::invalid_argument when table.ell does not belong to `group`,
/// PrecisionError when entry k is not certified to degree k.
BkRecord b_constant(SymmetryClass group, unsigned long k, const TauTable& table, bool factor = true);

struct BkTableOptions {
  bool factor = true;
  std::uint64_t factor_effort = 200000;
  /// Reuse recurrence tables from disk when set.
  std::optional<TauCache> cache;
};

std::vector<BkRecord> bk_table(SymmetryClass group, unsigned long k_max, TauMethod method,
                               const BkTableOptions& options = {});

/// b_k · (2N)^{e(k)} exactly.
Rational moment_asymptotic_exact(SymmetryClass group, unsigned long k, unsigned long N, const Rational& b_k);
Rational moment_asymptotic(SymmetryClass group, unsigned long k, unsigned long N);

/// Decimal rendering of a rational with `digits` significant digits
/// (scientific notation when the magnitude calls for it).
std::string to_decimal(const Rational& q, int digits = 30);
double to_double(const Rational& q);

struct EulerProduct {
  unsigned long k = 0;
  unsigned long prime_cutoff = 0;
  std::size_t primes_used = 0;
  std::string value;        // decimal, 50 significant digits
  std::string tail_error;   // bound on |log(a_k / partial product)|
  double value_double = 0.0;
  double tail_error_double = 0.0;
  double tail_coefficient = 0.0;  // C(k) in f_p = 1 + C(k)/p² + O(p^{-3})
};

/// The per-prime factor of a_k at prime p, as a decimal string (50 digits).
std::string euler_factor(unsigned long k, unsigned long p);

/// Coefficient C(k) of p^{-2} in the expansion of the per-prime factor
/// (the p^{-1} term cancels).
Rational euler_tail_coefficient(unsigned long k);

/// Product over primes p ≤ cutoff of the per-prime factor, in 60-digit
/// floating point. Primes are split into fixed-size blocks whose products are
/// combined in block order, so the result is independent of `workers`.
EulerProduct a_k_euler(unsigned long k, unsigned long prime_cutoff, unsigned workers = 1);

std::vector<unsigned long> primes_up_to(unsigned long n);

}  // namespace dmoments
