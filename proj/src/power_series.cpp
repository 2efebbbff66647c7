#include "dmoments/power_series.hpp"

#include <algorithm>
#include <string>

namespace dmoments {

TruncSeries::TruncSeries(std::size_t degree) : coeffs_(degree + 1) {}

TruncSeries::TruncSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.emplace_back(0);
}

TruncSeries TruncSeries::constant(const Rational& c, std::size_t degree) {
  TruncSeries s(degree);
  s[0] = c;
  return s;
}

TruncSeries TruncSeries::variable(std::size_t degree) {
  TruncSeries s(degree);
  if (degree >= 1) s[1] = 1;
  return s;
}

TruncSeries TruncSeries::truncated(std::size_t degree) const {
  if (degree >= this->degree()) return *this;
  return TruncSeries(std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + static_cast<long>(degree) + 1));
}

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
  TruncSeries out(std::min(a.degree(), b.degree()));
  for (std::size_t n = 0; n <= out.degree(); ++n) out[n] = a[n] + b[n];
  return out;
}

TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
  TruncSeries out(std::min(a.degree(), b.degree()));
  for (std::size_t n = 0; n <= out.degree(); ++n) out[n] = a[n] - b[n];
  return out;
}

TruncSeries operator-(const TruncSeries& a) {
  TruncSeries out(a.degree());
  for (std::size_t n = 0; n <= a.degree(); ++n) out[n] = -a[n];
  return out;
}

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
  const std::size_t d = std::min(a.degree(), b.degree());
  TruncSeries out(d);
  for (std::size_t i = 0; i <= d; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j <= d; ++j) {
      if (b[j] == 0) continue;
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

TruncSeries operator*(const Rational& c, const TruncSeries& a) {
  TruncSeries out(a.degree());
  for (std::size_t n = 0; n <= a.degree(); ++n) out[n] = c * a[n];
  return out;
}

TruncSeries operator/(const TruncSeries& a, const TruncSeries& b) {
  if (b[0] == 0) throw NonUnitDivisor("non-unit divisor: constant term of divisor is zero");
  const std::size_t d = std::min(a.degree(), b.degree());
  const Rational inv = 1 / b[0];
  TruncSeries q(d);
  for (std::size_t n = 0; n <= d; ++n) {
    Rational acc = a[n];
    for (std::size_t i = 0; i < n; ++i) {
      if (b[n - i] != 0) acc -= q[i] * b[n - i];
    }
    q[n] = acc * inv;
  }
  return q;
}

TruncSeries derivative(const TruncSeries& a) {
  if (a.degree() == 0) throw PrecisionError("insufficient precision: derivative of a degree-0 truncation");
  TruncSeries out(a.degree() - 1);
  for (std::size_t n = 0; n <= out.degree(); ++n) out[n] = a[n + 1] * static_cast<unsigned long>(n + 1);
  return out;
}

TruncSeries scale_argument(const TruncSeries& a, const Rational& c) {
  TruncSeries out(a.degree());
  Rational power = 1;
  for (std::size_t n = 0; n <= a.degree(); ++n) {
    out[n] = a[n] * power;
    power *= c;
  }
  return out;
}

TruncSeries shift_up(const TruncSeries& a, std::size_t shift) {
  TruncSeries out(a.degree());
  for (std::size_t n = shift; n <= a.degree(); ++n) out[n] = a[n - shift];
  return out;
}

Rational kth_derivative_at_zero(const TruncSeries& a, std::size_t k) {
  if (k > a.degree())
    throw PrecisionError("insufficient precision: need degree " + std::to_string(k) + ", have " +
                         std::to_string(a.degree()));
  return a[k] * Rational(factorial(static_cast<unsigned>(k)));
}

bool agree_to_common_degree(const TruncSeries& a, const TruncSeries& b) {
  const std::size_t d = std::min(a.degree(), b.degree());
  for (std::size_t n = 0; n <= d; ++n)
    if (a[n] != b[n]) return false;
  return true;
}

nlohmann::json to_json(const TruncSeries& s) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : s.coeffs()) coeffs.push_back(to_string(c));
  return {{"trunc_degree", s.degree()}, {"coeffs", std::move(coeffs)}};
}

TruncSeries series_from_json(const nlohmann::json& j) {
  const auto degree = j.at("trunc_degree").get<std::size_t>();
  const auto& arr = j.at("coeffs");
  if (!arr.is_array() || arr.size() != degree + 1)
    throw std::invalid_argument("series JSON: coeffs length does not match trunc_degree");
  std::vector<Rational> coeffs;
  coeffs.reserve(arr.size());
  for (const auto& c : arr) coeffs.push_back(parse_rational(c.get<std::string>()));
  return TruncSeries(std::move(coeffs));
}

// ---------------------------------------------------------------------------

BivariateTruncSeries::BivariateTruncSeries(std::size_t deg_x, std::size_t deg_y)
    : deg_x_(deg_x), deg_y_(deg_y), coeffs_((deg_x + 1) * (deg_y + 1)) {}

BivariateTruncSeries BivariateTruncSeries::truncated(std::size_t deg_x, std::size_t deg_y) const {
  deg_x = std::min(deg_x, deg_x_);
  deg_y = std::min(deg_y, deg_y_);
  BivariateTruncSeries out(deg_x, deg_y);
  for (std::size_t a = 0; a <= deg_x; ++a)
    for (std::size_t b = 0; b <= deg_y; ++b) out(a, b) = (*this)(a, b);
  return out;
}

bool BivariateTruncSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
}

namespace {

template <typename Op>
BivariateTruncSeries elementwise(const BivariateTruncSeries& a, const BivariateTruncSeries& b, Op op) {
  BivariateTruncSeries out(std::min(a.deg_x(), b.deg_x()), std::min(a.deg_y(), b.deg_y()));
  for (std::size_t i = 0; i <= out.deg_x(); ++i)
    for (std::size_t j = 0; j <= out.deg_y(); ++j) out(i, j) = op(a(i, j), b(i, j));
  return out;
}

}  // namespace

BivariateTruncSeries operator+(const BivariateTruncSeries& a, const BivariateTruncSeries& b) {
  return elementwise(a, b, [](const Rational& x, const Rational& y) { return Rational(x + y); });
}

BivariateTruncSeries operator-(const BivariateTruncSeries& a, const BivariateTruncSeries& b) {
  return elementwise(a, b, [](const Rational& x, const Rational& y) { return Rational(x - y); });
}

BivariateTruncSeries operator*(const BivariateTruncSeries& a, const BivariateTruncSeries& b) {
  const std::size_t dx = std::min(a.deg_x(), b.deg_x());
  const std::size_t dy = std::min(a.deg_y(), b.deg_y());
  BivariateTruncSeries out(dx, dy);
  for (std::size_t i1 = 0; i1 <= dx; ++i1)
    for (std::size_t j1 = 0; j1 <= dy; ++j1) {
      if (a(i1, j1) == 0) continue;
      for (std::size_t i2 = 0; i1 + i2 <= dx; ++i2)
        for (std::size_t j2 = 0; j1 + j2 <= dy; ++j2) {
          if (b(i2, j2) == 0) continue;
          out(i1 + i2, j1 + j2) += a(i1, j1) * b(i2, j2);
        }
    }
  return out;
}

BivariateTruncSeries operator*(const Rational& c, const BivariateTruncSeries& a) {
  BivariateTruncSeries out(a.deg_x(), a.deg_y());
  for (std::size_t i = 0; i <= a.deg_x(); ++i)
    for (std::size_t j = 0; j <= a.deg_y(); ++j) out(i, j) = c * a(i, j);
  return out;
}

BivariateTruncSeries partial_x(const BivariateTruncSeries& a) {
  if (a.deg_x() == 0) throw PrecisionError("insufficient precision: x-derivative of a degree-0 truncation");
  BivariateTruncSeries out(a.deg_x() - 1, a.deg_y());
  for (std::size_t i = 0; i <= out.deg_x(); ++i)
    for (std::size_t j = 0; j <= out.deg_y(); ++j) out(i, j) = a(i + 1, j) * static_cast<unsigned long>(i + 1);
  return out;
}

BivariateTruncSeries partial_y(const BivariateTruncSeries& a) {
  if (a.deg_y() == 0) throw PrecisionError("insufficient precision: y-derivative of a degree-0 truncation");
  BivariateTruncSeries out(a.deg_x(), a.deg_y() - 1);
  for (std::size_t i = 0; i <= out.deg_x(); ++i)
    for (std::size_t j = 0; j <= out.deg_y(); ++j) out(i, j) = a(i, j + 1) * static_cast<unsigned long>(j + 1);
  return out;
}

}  // namespace dmoments
