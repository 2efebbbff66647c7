#pragma once

#include "dmoments/power_series.hpp"

#include <cstddef>

namespace dmoments {

/// Truncated expansion of g_m(u) = (1/2πi)∮ e^{w + u/w²} w^{-m-1} dw.
/// Coefficient n is 1/(n!·(2n+m)!) when 2n+m ≥ 0 and 0 otherwise, so
/// negative m is handled by the vanishing of the low terms.
TruncSeries g_series(int m, std::size_t degree);

/// Σ u^n/n! truncated at `degree`.
TruncSeries exp_series(std::size_t degree);

/// The two-variable generalisation g̃_m(x, y) = (1/2πi)∮ e^{xz + y/z²} z^{-m-1} dz.
/// Supported on the diagonal a = m + 2b, with coefficient 1/(a!·b!).
BivariateTruncSeries g_bivariate(int m, std::size_t deg_x, std::size_t deg_y);

/// Double-precision evaluation of the truncated g_m series at u.
double g_series_value(int m, double u, std::size_t terms = 40);

}  // namespace dmoments
