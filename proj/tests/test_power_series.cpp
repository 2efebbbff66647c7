#include "dmoments/power_series.hpp"
#include "dmoments/special_functions.hpp"

#include <doctest.h>

#include <random>

using namespace dmoments;

namespace {

TruncSeries series(std::initializer_list<Rational> c) { return TruncSeries(std::vector<Rational>(c)); }

Rational q(long n, long d = 1) { return make_rational(n, d); }

TruncSeries random_series(std::mt19937_64& rng, std::size_t degree, bool unit = false) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
  TruncSeries s(degree);
  for (std::size_t n = 0; n <= degree; ++n) s[n] = q(num(rng), den(rng));
  if (unit && s[0] == 0) s[0] = q(1, 2);
  return s;
}

}  // namespace

TEST_CASE("ring operations") {
  CHECK(series({1, 1, 0}) * series({1, -1, 0}) == series({1, 0, -1}));

  const TruncSeries a = series({q(1, 2), 3, q(-7, 5)});
  CHECK(a + TruncSeries(2) == a);

  // e^u · e^{−u} = 1, with the product formed coefficient by coefficient.
  TruncSeries e_minus(6);
  for (std::size_t n = 0; n <= 6; ++n) e_minus[n] = make_rational(BigInteger(n % 2 ? -1 : 1), factorial(n));
  CHECK(exp_series(6) * e_minus == TruncSeries::constant(1, 6));
}

TEST_CASE("degree bookkeeping takes the minimum") {
  const TruncSeries a = exp_series(5), b = exp_series(3);
  CHECK((a * b).degree() == 3);
  CHECK((a + b).degree() == 3);
  CHECK((a - b).degree() == 3);
  CHECK((a / b).degree() == 3);
  CHECK(derivative(a).degree() == 4);
}

TEST_CASE("derivative") {
  CHECK(derivative(series({1, 1, q(1, 2), q(1, 6)})) == series({1, 1, q(1, 2)}));
  CHECK(derivative(series({1, 0})) == series({0}));
  CHECK(derivative(series({1, q(1, 6), q(1, 48)})) == series({q(1, 6), q(1, 24)}));
  // The actual g_1 prefix is 1 + u/6 + u²/240.
  CHECK(derivative(g_series(1, 2)) == series({q(1, 6), q(1, 120)}));
  CHECK(derivative(exp_series(7)) == exp_series(6));
  CHECK_THROWS_AS(derivative(series({5})), PrecisionError);
}

TEST_CASE("scale_argument") {
  CHECK(scale_argument(series({1, 1, 1}), 2) == series({1, 2, 4}));
  const TruncSeries a = series({q(3, 4), -2, q(1, 9)});
  CHECK(scale_argument(a, 1) == a);
  CHECK(scale_argument(series({1, q(1, 2), q(1, 48)}), 2) == series({1, 1, q(1, 12)}));
}

TEST_CASE("division") {
  CHECK(series({1, 0, -1, 0}) / series({1, -1, 0, 0}) == series({1, 1, 0, 0}));
  const TruncSeries a = series({q(2, 3), 1, -4, q(5, 2)});
  CHECK(a / a == TruncSeries::constant(1, 3));
  CHECK_THROWS_AS(a / series({0, 1, 0, 0}), NonUnitDivisor);

  // 2(u g1 g1'' + g1 g1' − u g1'²) divided by T_0 = 1 is T_{2,0}.
  const TruncSeries g1 = g_series(1, 6);
  const TruncSeries d1 = derivative(g1), d2 = derivative(d1);
  const TruncSeries u = TruncSeries::variable(6);
  const TruncSeries rhs = Rational(2) * (u * g1 * d2 + g1 * d1 - u * d1 * d1);
  const TruncSeries t2 = rhs / TruncSeries::constant(1, 6);
  CHECK(t2[0] == q(1, 3));
}

TEST_CASE("kth derivative at zero") {
  CHECK(kth_derivative_at_zero(series({1, 1, q(1, 2)}), 2) == 1);
  const TruncSeries shifted = exp_series(3) * scale_argument(g_series(1, 3), 2);
  CHECK(kth_derivative_at_zero(shifted, 1) == q(4, 3));
  CHECK(kth_derivative_at_zero(shifted, 0) == shifted[0]);
  CHECK_THROWS_AS(kth_derivative_at_zero(shifted, 4), PrecisionError);
}

TEST_CASE("ring axioms and division on random series") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + trial % 6;
    const TruncSeries a = random_series(rng, d), b = random_series(rng, d), c = random_series(rng, d);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    const TruncSeries unit = random_series(rng, d, true);
    CHECK((a * unit) / unit == a);
    // Product rule at the degree the derivative certifies.
    CHECK(derivative(a * b) == derivative(a) * b + a * derivative(b));
  }
}

TEST_CASE("series JSON round trip") {
  const TruncSeries s = g_series(-1, 5);
  const auto j = to_json(s);
  CHECK(j["trunc_degree"] == 5);
  CHECK(j["coeffs"][1] == "1");
  CHECK(series_from_json(j) == s);
  CHECK(series_from_json(nlohmann::json::parse(j.dump())) == s);
  auto broken = j;
  broken["trunc_degree"] = 7;
  CHECK_THROWS_AS(series_from_json(broken), std::invalid_argument);
}

TEST_CASE("bivariate basics") {
  BivariateTruncSeries xy(2, 2);
  xy(1, 1) = 1;
  BivariateTruncSeries y(1, 2);
  y(0, 1) = 1;
  CHECK(partial_x(xy) == y);

  BivariateTruncSeries plus(2, 2), minus(2, 2), expected(2, 2);
  plus(1, 0) = 1;
  plus(0, 1) = 1;
  minus(1, 0) = 1;
  minus(0, 1) = -1;
  expected(2, 0) = 1;
  expected(0, 2) = -1;
  CHECK(plus * minus == expected);

  CHECK_THROWS_AS(partial_y(BivariateTruncSeries(3, 0)), PrecisionError);
}

TEST_CASE("bivariate partials commute") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> num(-5, 5);
  for (int trial = 0; trial < 10; ++trial) {
    BivariateTruncSeries a(4, 3);
    for (std::size_t i = 0; i <= 4; ++i)
      for (std::size_t j = 0; j <= 3; ++j) a(i, j) = make_rational(num(rng), 1 + trial);
    CHECK(partial_x(partial_y(a)) == partial_y(partial_x(a)));
  }
}

TEST_CASE("partials of g-tilde shift the index") {
  for (int m = -3; m <= 4; ++m) {
    const auto g = g_bivariate(m, 10, 4);
    CHECK(partial_x(g) == g_bivariate(m - 1, 9, 4));
    CHECK(partial_y(g) == g_bivariate(m + 2, 10, 3));
  }
}
