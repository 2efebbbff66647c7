#pragma once

// Monte Carlo check of the moment asymptotics: Haar-random matrices from
// SO(2N), O⁻(2N) and USp(2N), their characteristic polynomials
// Λ(x) = Π (1 − e^{iθ}x)(1 − e^{−iθ}x) (times (1 − x²) for O⁻), and empirical
// moments of Λ^{(m)}(1).

#include "dmoments/moment_constants.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace dmoments {

using Rng = std::mt19937_64;

enum class OrthogonalComponent { plus, minus };

struct EigenangleSample {
  SymmetryClass group = SymmetryClass::SO;
  unsigned N = 0;
  /// θ ∈ [0, π]; N of them for SO/USp, N − 1 for O⁻ (the forced ±1 pair is
  /// implicit).
  std::vector<double> angles;
  /// 2 − 2cos θ for each angle, kept separately because it is what the
  /// derivative evaluation at x = 1 needs and it loses accuracy through θ.
  std::vector<double> gaps;
};

/// Haar-random element of O(2N) restricted to one determinant component.
Eigen::MatrixXd haar_orthogonal(unsigned N, OrthogonalComponent component, Rng& rng);

/// Haar-random element of USp(2N) in the block form [[A, B], [−B̄, Ā]],
/// built from Gram–Schmidt over the quaternions.
Eigen::MatrixXcd haar_symplectic(unsigned N, Rng& rng);

/// Eigen-angles of a sampled matrix; throws std::runtime_error when the
/// eigenvalues cannot be paired (signals a bad sample).
EigenangleSample angles_from_orthogonal(const Eigen::MatrixXd& q, OrthogonalComponent component);
EigenangleSample angles_from_symplectic(const Eigen::MatrixXcd& u);

/// Draw until a sample passes its sanity checks; failed draws are added to
/// `*resamples` when given.
EigenangleSample sample_orthogonal(unsigned N, OrthogonalComponent component, Rng& rng,
                                   std::uint64_t* resamples = nullptr);
EigenangleSample sample_symplectic(unsigned N, Rng& rng, std::uint64_t* resamples = nullptr);

/// Coefficients of Λ(x), ascending, length 2N + 1.
std::vector<double> charpoly_coeffs(const EigenangleSample& sample);

/// Taylor coefficients of Λ at x = 1, i.e. Λ(1 + h) in powers of h. Every
/// quadratic factor becomes s + s·h + h² with s = 2 − 2cos θ ≥ 0, so the
/// product has no cancellation.
std::vector<double> charpoly_shifted_coeffs(const EigenangleSample& sample);

/// Σ_j c_j · j!/(j − m)!; throws std::invalid_argument if m > degree.
double derivative_at_one(std::span<const double> coeffs, unsigned m);

/// Λ^{(m)}(1) from the shifted coefficients: m! · c_m.
double derivative_at_one_shifted(std::span<const double> shifted, unsigned m);

struct MCEstimate {
  SymmetryClass group = SymmetryClass::SO;
  unsigned N = 0;
  unsigned k = 0;
  unsigned m = 0;
  std::uint64_t num_samples = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::optional<double> prediction;  // b_k (2N)^{e(k)} when (group, m) matches a theorem
  std::optional<double> ratio;       // |mean| / prediction
  bool prediction_flagged = false;   // (group, m) has no leading-order prediction
  std::uint64_t resamples = 0;
  double identity_max_rel_error = 0.0;  // worst per-sample Λ'/Λ or Λ''/Λ' deviation
  double wall_seconds = 0.0;
};

struct MCOptions {
  unsigned workers = 1;
  /// Check Λ'(1) = NΛ(1) (SO/USp) or Λ''(1) = (2N − 1)Λ'(1) (O⁻) on each sample.
  bool check_identities = true;
};

/// Seed for sample `index`, a pure function of (master_seed, index).
std::uint64_t sample_seed(std::uint64_t master_seed, std::uint64_t index);

/// Sum with a fixed pairwise tree, so the result depends only on the values.
double pairwise_sum(std::span<const double> values);

MCEstimate estimate_moment(SymmetryClass group, unsigned N, unsigned k, unsigned m, std::uint64_t num_samples,
                           std::uint64_t seed, const MCOptions& options = {});

/// Relative deviation from the derivative identity of the class, computed
/// from the shifted coefficients.
double identity_relative_error(const EigenangleSample& sample);

}  // namespace dmoments
