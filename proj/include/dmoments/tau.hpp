#pragma once

// The determinants T_{k,l}(u) = det_{k×k}(g_{2i-j+l}(u)), i, j = 1..k, computed
// either directly (the oracle) or through the differential recurrence
//
//   T_{k+1} T_{k-1} = 2 (u T_k T_k'' + T_k T_k' - u (T_k')²)
//
// which only needs series products and one division per step.

#include "dmoments/power_series.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dmoments {

enum class TauMethod { determinant, recurrence };

std::string to_string(TauMethod m);
TauMethod tau_method_from_string(const std::string& s);

/// How much of each recurrence entry to keep once the table is built.
enum class TauRetention {
  full,    // every entry at its certified degree
  prefix,  // entry k trimmed to degree k, which is all the moment constants need
};

struct TauTable {
  int ell = 0;
  TauMethod method = TauMethod::recurrence;
  std::vector<TruncSeries> entries;              // index k = 0..k_max
  std::vector<std::size_t> certified_degrees;    // same indexing

  std::size_t k_max() const { return entries.empty() ? 0 : entries.size() - 1; }

  friend bool operator==(const TauTable&, const TauTable&) = default;
};

/// Determinant oracle. Gaussian elimination over the series ring with pivots
/// restricted to units (nonzero constant term); a column without a unit falls
/// back to cofactor expansion along it.
TruncSeries tau_det(std::size_t k, int ell, std::size_t degree);

/// Recurrence fast path. Requires base_degree ≥ 2·k_max − 1 so that entry k is
/// certified to degree ≥ k. Throws NonUnitDivisor if an intermediate entry has
/// a vanishing constant term.
/// `on_entry(k)` runs right after entry k is appended.
TauTable tau_recurrence_table(std::size_t k_max, int ell, std::size_t base_degree,
                              TauRetention retention = TauRetention::full,
                              const std::function<void(std::size_t)>& on_entry = {});

/// Same inputs, but every entry computed independently by tau_det.
TauTable tau_determinant_table(std::size_t k_max, int ell, std::size_t degree);

/// Smallest base degree that certifies entry k_max to degree k_max.
inline std::size_t recurrence_base_degree(std::size_t k_max) { return k_max == 0 ? 0 : 2 * k_max - 1; }
/// For l = -2 every T_k has valuation k, and dividing by T_{k-1} spends k - 1
/// more degrees, so entry k is certified to base − k(k−1)/2.
inline std::size_t recurrence_base_degree(std::size_t k_max, int ell) {
  const std::size_t base = recurrence_base_degree(k_max);
  return ell == -2 ? std::max(base, k_max * (k_max + 1) / 2) : base;
}

/// One step of the right-hand side of the recurrence,
/// 2(u·T·T'' + T·T' − u·T'²), certified to degree deg(T) − 1.
TruncSeries recurrence_rhs(const TruncSeries& t);

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Exact cofactor-expansion determinant.
Rational cofactor_determinant(const RationalMatrix& a);

/// Desnanot–Jacobi identity for rows/columns i and j (0-based, i != j):
/// det A(i|i)·det A(j|j) − det A(i|j)·det A(j|i) = det A · det A(i,j|i,j).
bool dodgson_identity_holds(const RationalMatrix& a, std::size_t i, std::size_t j);

/// Checks the identity at the corner pair (first, last) and at one pair drawn
/// from `seed`.
bool dodgson_check(const RationalMatrix& a, std::uint64_t seed = 0x5eed);

/// det_{k×k}(g̃_{2i-j+l}(x, y)) by cofactor expansion.
BivariateTruncSeries bivariate_tau(std::size_t k, int ell, std::size_t deg_x, std::size_t deg_y);

/// x^{k(k+1)/2 + k·l} · T(x²y) laid out on the given (deg_x, deg_y) grid.
/// Throws std::domain_error when the exponent is negative.
BivariateTruncSeries tau_specialized(const TruncSeries& tau, std::size_t k, int ell, std::size_t deg_x,
                                     std::size_t deg_y);

// --- on-disk cache ---------------------------------------------------------

nlohmann::json to_json(const TauTable& table);
/// Throws std::runtime_error if the stored content hash does not match.
TauTable tau_table_from_json(const nlohmann::json& j);

/// 64-bit FNV-1a over the canonical JSON dump of the payload.
std::string content_hash(const std::string& canonical);

class TauCache {
 public:
  explicit TauCache(std::filesystem::path dir);

  /// $DMOMENTS_CACHE_DIR when set, otherwise none.
  static std::optional<TauCache> from_environment();

  std::filesystem::path path_for(int ell, std::size_t k_max, std::size_t base_degree, TauRetention retention) const;

  std::optional<TauTable> load(int ell, std::size_t k_max, std::size_t base_degree, TauRetention retention) const;
  void store(const TauTable& table, std::size_t base_degree, TauRetention retention) const;

  /// Load or compute-and-store a recurrence table.
  TauTable recurrence_table(std::size_t k_max, int ell, std::size_t base_degree, TauRetention retention) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace dmoments
