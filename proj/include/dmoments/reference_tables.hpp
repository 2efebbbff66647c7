#pragma once

#include "dmoments/moment_constants.hpp"

#include <span>

namespace dmoments {

struct ReferenceValue {
  SymmetryClass group;
  unsigned long k;
  const char* exact;                // "num/den"
  const char* numerator_factors;    // e.g. "19"
  const char* denominator_factors;  // e.g. "2^4 * 3^2 * 5 * 7"
};

/// Known exact values of b_k used as regression data.
std::span<const ReferenceValue> reference_values();

}  // namespace dmoments
