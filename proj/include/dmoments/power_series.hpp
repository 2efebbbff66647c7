#pragma once

// Truncated power series over the rationals. A series of truncation degree d
// is known modulo u^(d+1); every operation reports the degree it can certify.

#include "dmoments/exact_arith.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <vector>

namespace dmoments {

class TruncSeries {
 public:
  /// The zero series known to `degree`.
  explicit TruncSeries(std::size_t degree = 0);
  /// Takes the coefficient list as-is; degree = coeffs.size() - 1.
  explicit TruncSeries(std::vector<Rational> coeffs);

  static TruncSeries constant(const Rational& c, std::size_t degree);
  /// The monomial u at the given degree (zero if degree == 0).
  static TruncSeries variable(std::size_t degree);

  std::size_t degree() const { return coeffs_.size() - 1; }
  const Rational& operator[](std::size_t n) const { return coeffs_[n]; }
  Rational& operator[](std::size_t n) { return coeffs_[n]; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  /// Drops terms above `degree`; never extends.
  TruncSeries truncated(std::size_t degree) const;

  friend bool operator==(const TruncSeries&, const TruncSeries&) = default;

 private:
  std::vector<Rational> coeffs_;
};

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b);
TruncSeries operator-(const TruncSeries& a, const TruncSeries& b);
TruncSeries operator-(const TruncSeries& a);
TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
TruncSeries operator*(const Rational& c, const TruncSeries& a);

/// Forward substitution; throws NonUnitDivisor if b has zero constant term.
TruncSeries operator/(const TruncSeries& a, const TruncSeries& b);

/// Throws PrecisionError on a degree-0 input.
TruncSeries derivative(const TruncSeries& a);

/// a(c·u).
TruncSeries scale_argument(const TruncSeries& a, const Rational& c);

/// u^shift · a, keeping the same truncation degree.
TruncSeries shift_up(const TruncSeries& a, std::size_t shift);

/// k-th derivative at 0, i.e. k!·a_k. Throws PrecisionError if k > degree.
Rational kth_derivative_at_zero(const TruncSeries& a, std::size_t k);

/// True when a and b agree on every coefficient up to min of their degrees.
bool agree_to_common_degree(const TruncSeries& a, const TruncSeries& b);

nlohmann::json to_json(const TruncSeries& s);
TruncSeries series_from_json(const nlohmann::json& j);

/// Truncated series in x and y. Degrees are tracked per variable.
class BivariateTruncSeries {
 public:
  BivariateTruncSeries(std::size_t deg_x, std::size_t deg_y);

  std::size_t deg_x() const { return deg_x_; }
  std::size_t deg_y() const { return deg_y_; }

  const Rational& operator()(std::size_t a, std::size_t b) const { return coeffs_[a * (deg_y_ + 1) + b]; }
  Rational& operator()(std::size_t a, std::size_t b) { return coeffs_[a * (deg_y_ + 1) + b]; }

  BivariateTruncSeries truncated(std::size_t deg_x, std::size_t deg_y) const;
  bool is_zero() const;

  friend bool operator==(const BivariateTruncSeries&, const BivariateTruncSeries&) = default;

 private:
  std::size_t deg_x_;
  std::size_t deg_y_;
  std::vector<Rational> coeffs_;
};

BivariateTruncSeries operator+(const BivariateTruncSeries& a, const BivariateTruncSeries& b);
BivariateTruncSeries operator-(const BivariateTruncSeries& a, const BivariateTruncSeries& b);
BivariateTruncSeries operator*(const BivariateTruncSeries& a, const BivariateTruncSeries& b);
BivariateTruncSeries operator*(const Rational& c, const BivariateTruncSeries& a);

BivariateTruncSeries partial_x(const BivariateTruncSeries& a);
BivariateTruncSeries partial_y(const BivariateTruncSeries& a);

}  // namespace dmoments
