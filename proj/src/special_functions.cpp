#include "dmoments/special_functions.hpp"

#include <cmath>

namespace dmoments {

TruncSeries g_series(int m, std::size_t degree) {
  TruncSeries s(degree);
  for (std::size_t n = 0; n <= degree; ++n) {
    const long lower = 2 * static_cast<long>(n) + m;
    if (lower < 0) continue;
    s[n] = make_rational(BigInteger(1), factorial(static_cast<unsigned>(n)) * factorial(static_cast<unsigned>(lower)));
  }
  return s;
}

TruncSeries exp_series(std::size_t degree) {
  TruncSeries s(degree);
  for (std::size_t n = 0; n <= degree; ++n) s[n] = make_rational(BigInteger(1), factorial(static_cast<unsigned>(n)));
  return s;
}

BivariateTruncSeries g_bivariate(int m, std::size_t deg_x, std::size_t deg_y) {
  BivariateTruncSeries s(deg_x, deg_y);
  for (std::size_t b = 0; b <= deg_y; ++b) {
    const long a = m + 2 * static_cast<long>(b);
    if (a < 0 || static_cast<std::size_t>(a) > deg_x) continue;
    s(static_cast<std::size_t>(a), b) =
        make_rational(BigInteger(1), factorial(static_cast<unsigned>(a)) * factorial(static_cast<unsigned>(b)));
  }
  return s;
}

double g_series_value(int m, double u, std::size_t terms) {
  double sum = 0.0;
  for (std::size_t n = 0; n < terms; ++n) {
    const long lower = 2 * static_cast<long>(n) + m;
    if (lower < 0) continue;
    // log-gamma keeps the factorials from overflowing for large n.
    const double log_term = static_cast<double>(n) * std::log(std::abs(u)) - std::lgamma(static_cast<double>(n) + 1) -
                            std::lgamma(static_cast<double>(lower) + 1);
    double term = (n == 0) ? std::exp(-std::lgamma(static_cast<double>(lower) + 1)) : std::exp(log_term);
    if (u < 0 && (n % 2 == 1)) term = -term;
    if (u == 0 && n > 0) term = 0;
    sum += term;
  }
  return sum;
}

}  // namespace dmoments
