#include "dmoments/moment_constants.hpp"
#include "dmoments/reference_tables.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace dmoments;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

Rational bk(SymmetryClass g, unsigned long k, TauMethod method = TauMethod::recurrence) {
  BkTableOptions options;
  options.factor = false;
  return bk_table(g, k, method, options).back().value;
}

}  // namespace

TEST_CASE("group attributes") {
  CHECK(derivative_order(SymmetryClass::USp) == 2);
  CHECK(derivative_order(SymmetryClass::SO) == 2);
  CHECK(derivative_order(SymmetryClass::OMinus) == 3);
  CHECK(tau_ell(SymmetryClass::SO) == -1);
  CHECK(exponent_of_2N(SymmetryClass::USp, 1) == 3);
  CHECK(exponent_of_2N(SymmetryClass::SO, 1) == 2);
  CHECK(exponent_of_2N(SymmetryClass::OMinus, 2) == 7);
  CHECK(symmetry_class_from_string("USp") == SymmetryClass::USp);
  CHECK(symmetry_class_from_string("ominus") == SymmetryClass::OMinus);
  CHECK_THROWS_AS(symmetry_class_from_string("u"), std::invalid_argument);
}

TEST_CASE("b_constant examples") {
  CHECK(bk(SymmetryClass::USp, 1) == q(1, 6));
  CHECK(bk(SymmetryClass::SO, 1) == 1);
  CHECK(bk(SymmetryClass::SO, 2) == q(7, 30));
  CHECK(bk(SymmetryClass::USp, 2) == q(19, 5040));
  CHECK(bk(SymmetryClass::OMinus, 1) == 1);
}

TEST_CASE("b_constant rejects mismatched or short tables") {
  const TauTable t = tau_recurrence_table(3, 0, recurrence_base_degree(3));
  CHECK_THROWS_AS(b_constant(SymmetryClass::SO, 2, t), std::invalid_argument);
  CHECK_THROWS_AS(b_constant(SymmetryClass::USp, 4, t), PrecisionError);
  TauTable shallow = t;
  shallow.entries[3] = shallow.entries[3].truncated(2);
  CHECK_THROWS_AS(b_constant(SymmetryClass::USp, 3, shallow), PrecisionError);
}

TEST_CASE("recurrence reproduces the published tables") {
  BkTableOptions options;
  const auto usp = bk_table(SymmetryClass::USp, 10, TauMethod::recurrence, options);
  const auto so = bk_table(SymmetryClass::SO, 10, TauMethod::recurrence, options);
  const auto om = bk_table(SymmetryClass::OMinus, 10, TauMethod::recurrence, options);
  for (const auto& ref : reference_values()) {
    const auto& rows = ref.group == SymmetryClass::USp ? usp : ref.group == SymmetryClass::SO ? so : om;
    const BkRecord& rec = rows.at(ref.k - 1);
    CHECK_MESSAGE(to_string(rec.value) == ref.exact, to_string(ref.group) << " k=" << ref.k);
    REQUIRE(rec.factored.complete());
    const std::string den = ref.denominator_factors;
    CHECK(format_factored(rec.factored) ==
          (std::string(ref.numerator_factors).find(' ') != std::string::npos
               ? "(" + std::string(ref.numerator_factors) + ")"
               : std::string(ref.numerator_factors)) +
              (den.empty() || den == "1" ? "" : " / (" + den + ")"));
  }
  const auto& b10 = usp.back().factored;
  CHECK(b10.numerator.factors.back().prime == 152825093);
  CHECK(b10.denominator.factors.front().exponent == 62);
}

TEST_CASE("determinant and recurrence agree") {
  for (auto g : {SymmetryClass::USp, SymmetryClass::SO, SymmetryClass::OMinus}) {
    BkTableOptions options;
    options.factor = false;
    const auto det = bk_table(g, 6, TauMethod::determinant, options);
    const auto rec = bk_table(g, 6, TauMethod::recurrence, options);
    for (std::size_t i = 0; i < det.size(); ++i) CHECK(det[i].value == rec[i].value);
  }
}

TEST_CASE("O-minus constant is 3·2^k times the symplectic one") {
  BkTableOptions options;
  options.factor = false;
  const auto usp = bk_table(SymmetryClass::USp, 25, TauMethod::recurrence, options);
  const auto om = bk_table(SymmetryClass::OMinus, 25, TauMethod::recurrence, options);
  for (unsigned long k = 1; k <= 25; ++k) {
    BigInteger two_k;
    mpz_ui_pow_ui(two_k.get_mpz_t(), 2, k);
    CHECK(om[k - 1].value == 3 * Rational(two_k) * usp[k - 1].value);
  }
  for (unsigned long k : {1UL, 3UL, 6UL})
    for (unsigned long N : {1UL, 7UL, 50UL}) {
      BigInteger two_k;
      mpz_ui_pow_ui(two_k.get_mpz_t(), 2, k);
      CHECK(moment_asymptotic(SymmetryClass::OMinus, k, N) /
                moment_asymptotic(SymmetryClass::USp, k, N) ==
            3 * Rational(two_k));
    }
}

TEST_CASE("moment_asymptotic examples") {
  CHECK(moment_asymptotic(SymmetryClass::SO, 1, 50) == 10000);
  CHECK(moment_asymptotic(SymmetryClass::USp, 1, 1) == q(4, 3));
}

TEST_CASE("bk through the cache matches the direct table") {
  const auto dir = std::filesystem::temp_directory_path() / "dmoments_test_bk_cache";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  BkTableOptions options;
  options.factor = false;
  options.cache = TauCache(dir);
  const auto cached = bk_table(SymmetryClass::SO, 8, TauMethod::recurrence, options);
  const auto again = bk_table(SymmetryClass::SO, 8, TauMethod::recurrence, options);
  CHECK(cached.back().value == bk(SymmetryClass::SO, 8));
  CHECK(again.back().value == cached.back().value);
  std::filesystem::remove_all(dir);
}

TEST_CASE("decimal rendering") {
  CHECK(to_decimal(q(1, 6), 5) == "0.16667");
  CHECK(to_decimal(q(1, 3), 3) == "0.333");
  CHECK(to_decimal(q(7, 30), 4) == "0.2333");
  CHECK(to_decimal(Rational(10000), 30) == "10000");
  CHECK(to_decimal(q(-19, 5040), 4) == "-0.00377");
  CHECK(to_decimal(q(1, 1000000000), 3) == "1e-9");
  CHECK(to_decimal(Rational(0)) == "0");
  CHECK(to_decimal(q(2, 3), 30) == "0.666666666666666666666666666667");
  CHECK(to_decimal(q(123456, 10), 3) == "1.23e4");
}

TEST_CASE("Euler factor examples") {
  // k = 1: the factor simplifies to 1 − 1/(p² + p).
  CHECK(std::stod(euler_factor(1, 2)) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(euler_factor(1, 2).substr(0, 20) == "0.833333333333333333");
  for (unsigned long p : primes_up_to(200)) {
    const double expect = 1.0 - 1.0 / (static_cast<double>(p) * p + p);
    CHECK(std::stod(euler_factor(1, p)) == doctest::Approx(expect).epsilon(1e-15));
  }
  for (unsigned long k = 1; k <= 5; ++k) {
    const auto e = a_k_euler(k, 2);
    CHECK(e.primes_used == 1);
    CHECK(e.value == euler_factor(k, 2));
  }
  CHECK(euler_tail_coefficient(1) == -1);
  CHECK(euler_tail_coefficient(2) == -4);
  CHECK_THROWS_AS(a_k_euler(1, 1), std::invalid_argument);
}

TEST_CASE("Euler product is worker independent and converges for k = 1") {
  const auto one = a_k_euler(1, 100000, 1);
  const auto four = a_k_euler(1, 100000, 4);
  CHECK(one.value == four.value);
  const auto longer = a_k_euler(1, 1000000, 2);
  CHECK(std::abs(one.value_double - longer.value_double) / longer.value_double < 1e-6);
  CHECK(std::abs(one.value_double - longer.value_double) <= one.tail_error_double);
}
