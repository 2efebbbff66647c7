#include "dmoments/haar_mc.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <thread>

namespace dmoments {

namespace {

constexpr double kPairTolerance = 1e-6;
constexpr double kOrthonormalityTolerance = 1e-10;
constexpr int kMaxResamples = 64;

struct Quaternion {
  double a = 0, b = 0, c = 0, d = 0;  // a + b·i + c·j + d·k
};

Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d, p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
          p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b, p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a};
}

Quaternion conj(const Quaternion& q) { return {q.a, -q.b, -q.c, -q.d}; }

double norm2(const Quaternion& q) { return q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d; }

std::vector<double> pair_up(std::span<const double> sorted_cosines) {
  if (sorted_cosines.size() % 2 != 0) throw std::runtime_error("odd number of eigenvalues to pair");
  std::vector<double> out;
  out.reserve(sorted_cosines.size() / 2);
  for (std::size_t i = 0; i < sorted_cosines.size(); i += 2) {
    if (std::abs(sorted_cosines[i] - sorted_cosines[i + 1]) > kPairTolerance)
      throw std::runtime_error("eigenvalues of the symmetrised matrix do not come in pairs");
    out.push_back(0.5 * (sorted_cosines[i] + sorted_cosines[i + 1]));
  }
  return out;
}

// Cosines of the eigenangles, each twice, sorted. The self-adjoint solver on the
// symmetrised matrix occasionally fails on its exactly repeated spectrum; the
// real parts of the unitary's own eigenvalues give the same values.
template <class Matrix>
std::vector<double> sorted_cosines(const Matrix& a) {
  const Eigen::Index n = a.rows();
  const Matrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() == Eigen::Success)
    return std::vector<double>(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> general(a.template cast<std::complex<double>>(), false);
  if (general.info() != Eigen::Success) throw std::runtime_error("eigen-solver did not converge");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(general.eigenvalues()[i].real());
  std::sort(out.begin(), out.end());
  return out;
}

void fill_angles(EigenangleSample& s, const std::vector<double>& cosines) {
  s.angles.clear();
  s.gaps.clear();
  for (double c : cosines) {
    c = std::clamp(c, -1.0, 1.0);
    s.angles.push_back(std::acos(c));
    s.gaps.push_back(2.0 - 2.0 * c);
  }
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Eigen::MatrixXd haar_orthogonal(unsigned N, OrthogonalComponent component, Rng& rng) {
  if (N == 0) throw std::invalid_argument("N must be positive");
  const Eigen::Index n = 2 * static_cast<Eigen::Index>(N);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const auto& r = qr.matrixQR();
  // Positive diagonal in R makes the factorisation unique and Q Haar on O(2N).
  for (Eigen::Index j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  const double det = q.determinant();
  const bool want_plus = component == OrthogonalComponent::plus;
  if ((det > 0) != want_plus) q.col(n - 1) = -q.col(n - 1);
  return q;
}

Eigen::MatrixXcd haar_symplectic(unsigned N, Rng& rng) {
  if (N == 0) throw std::invalid_argument("N must be positive");
  std::normal_distribution<double> normal;
  // Column-major quaternion matrix.
  std::vector<Quaternion> q(static_cast<std::size_t>(N) * N);
  auto at = [&](unsigned row, unsigned col) -> Quaternion& { return q[static_cast<std::size_t>(col) * N + row]; };
  for (auto& x : q) x = {normal(rng), normal(rng), normal(rng), normal(rng)};

  // Modified Gram–Schmidt over H^N as a right module: v ← v − u⟨u, v⟩ with
  // ⟨u, v⟩ = Σ conj(u_l) v_l.
  for (unsigned j = 0; j < N; ++j) {
    for (unsigned i = 0; i < j; ++i) {
      Quaternion r;
      for (unsigned l = 0; l < N; ++l) {
        const Quaternion t = conj(at(l, i)) * at(l, j);
        r.a += t.a;
        r.b += t.b;
        r.c += t.c;
        r.d += t.d;
      }
      for (unsigned l = 0; l < N; ++l) {
        const Quaternion t = at(l, i) * r;
        Quaternion& v = at(l, j);
        v.a -= t.a;
        v.b -= t.b;
        v.c -= t.c;
        v.d -= t.d;
      }
    }
    double len2 = 0.0;
    for (unsigned l = 0; l < N; ++l) len2 += norm2(at(l, j));
    const double inv = 1.0 / std::sqrt(len2);
    for (unsigned l = 0; l < N; ++l) {
      Quaternion& v = at(l, j);
      v.a *= inv;
      v.b *= inv;
      v.c *= inv;
      v.d *= inv;
    }
  }

  // q = z1 + z2·j ↦ [[z1, z2], [−conj(z2), conj(z1)]], arranged blockwise.
  const Eigen::Index n = N;
  Eigen::MatrixXcd u(2 * n, 2 * n);
  for (unsigned col = 0; col < N; ++col)
    for (unsigned row = 0; row < N; ++row) {
      const Quaternion& x = at(row, col);
      const std::complex<double> z1(x.a, x.b), z2(x.c, x.d);
      u(row, col) = z1;
      u(row, n + col) = z2;
      u(n + row, col) = -std::conj(z2);
      u(n + row, n + col) = std::conj(z1);
    }
  return u;
}

EigenangleSample angles_from_orthogonal(const Eigen::MatrixXd& q, OrthogonalComponent component) {
  const Eigen::Index n = q.rows();
  if (n == 0 || n % 2 != 0 || q.cols() != n) throw std::invalid_argument("expected a square matrix of even size");
  EigenangleSample s;
  s.N = static_cast<unsigned>(n / 2);
  s.group = component == OrthogonalComponent::plus ? SymmetryClass::SO : SymmetryClass::OMinus;
  // Eigenvalues of (Q + Qᵀ)/2 are cos θ, each twice, plus the bare ±1 of a
  // reflection.
  const std::vector<double> ev = sorted_cosines(q);
  std::span<const double> paired(ev);
  if (component == OrthogonalComponent::minus) paired = paired.subspan(1, ev.size() - 2);
  fill_angles(s, pair_up(paired));
  return s;
}

EigenangleSample angles_from_symplectic(const Eigen::MatrixXcd& u) {
  const Eigen::Index n = u.rows();
  if (n == 0 || n % 2 != 0 || u.cols() != n) throw std::invalid_argument("expected a square matrix of even size");
  EigenangleSample s;
  s.N = static_cast<unsigned>(n / 2);
  s.group = SymmetryClass::USp;
  const std::vector<double> ev = sorted_cosines(u);
  fill_angles(s, pair_up(ev));
  return s;
}

EigenangleSample sample_orthogonal(unsigned N, OrthogonalComponent component, Rng& rng,
                                   std::uint64_t* resamples) {
  if (N == 0) throw std::invalid_argument("N must be positive");
  for (int attempt = 0;; ++attempt) {
    try {
      return angles_from_orthogonal(haar_orthogonal(N, component, rng), component);
    } catch (const std::runtime_error&) {
      if (attempt >= kMaxResamples) throw;
      if (resamples != nullptr) ++*resamples;
    }
  }
}

EigenangleSample sample_symplectic(unsigned N, Rng& rng, std::uint64_t* resamples) {
  if (N == 0) throw std::invalid_argument("N must be positive");
  for (int attempt = 0;; ++attempt) {
    try {
      const Eigen::MatrixXcd u = haar_symplectic(N, rng);
      const double drift =
          (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
      if (drift > kOrthonormalityTolerance) throw std::runtime_error("lost orthonormality");
      return angles_from_symplectic(u);
    } catch (const std::runtime_error&) {
      if (attempt >= kMaxResamples) throw;
      if (resamples != nullptr) ++*resamples;
    }
  }
}

std::vector<double> charpoly_coeffs(const EigenangleSample& sample) {
  std::vector<double> poly{1.0};
  if (sample.group == SymmetryClass::OMinus) poly = {1.0, 0.0, -1.0};
  for (double gap : sample.gaps) poly = convolve(poly, {1.0, gap - 2.0, 1.0});
  return poly;
}

std::vector<double> charpoly_shifted_coeffs(const EigenangleSample& sample) {
  std::vector<double> poly{1.0};
  if (sample.group == SymmetryClass::OMinus) poly = {0.0, -2.0, -1.0};
  for (double s : sample.gaps) poly = convolve(poly, {s, s, 1.0});
  return poly;
}

double derivative_at_one(std::span<const double> coeffs, unsigned m) {
  if (m >= coeffs.size()) return 0.0;
  double sum = 0.0;
  for (std::size_t j = m; j < coeffs.size(); ++j) {
    double falling = 1.0;
    for (unsigned t = 0; t < m; ++t) falling *= static_cast<double>(j - t);
    sum += coeffs[j] * falling;
  }
  return sum;
}

double derivative_at_one_shifted(std::span<const double> shifted, unsigned m) {
  if (m >= shifted.size()) return 0.0;
  double fact = 1.0;
  for (unsigned t = 2; t <= m; ++t) fact *= t;
  return fact * shifted[m];
}

double identity_relative_error(const EigenangleSample& sample) {
  const auto c = charpoly_shifted_coeffs(sample);
  double lhs = 0.0, rhs = 0.0;
  if (sample.group == SymmetryClass::OMinus) {
    lhs = 2.0 * c[2];                                       // Λ''(1)
    rhs = (2.0 * sample.N - 1.0) * c[1];                    // (2N − 1)Λ'(1)
  } else {
    lhs = c[1];                                             // Λ'(1)
    rhs = static_cast<double>(sample.N) * c[0];             // NΛ(1)
  }
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

std::uint64_t sample_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ (index * 0xD1B54A32D192ED03ULL));
}

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

MCEstimate estimate_moment(SymmetryClass group, unsigned N, unsigned k, unsigned m, std::uint64_t num_samples,
                           std::uint64_t seed, const MCOptions& options) {
  if (N == 0) throw std::invalid_argument("N must be positive");
  if (num_samples == 0) throw std::invalid_argument("num_samples must be positive");
  const auto start = std::chrono::steady_clock::now();

  std::vector<double> values(num_samples);
  std::vector<double> worst(num_samples, 0.0);
  std::vector<std::uint64_t> redraws(num_samples, 0);

  auto run = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng(sample_seed(seed, i));
      EigenangleSample s = group == SymmetryClass::USp
                               ? sample_symplectic(N, rng, &redraws[i])
                               : sample_orthogonal(N,
                                                   group == SymmetryClass::SO ? OrthogonalComponent::plus
                                                                              : OrthogonalComponent::minus,
                                                   rng, &redraws[i]);
      const auto shifted = charpoly_shifted_coeffs(s);
      values[i] = std::pow(derivative_at_one_shifted(shifted, m), static_cast<double>(k));
      if (options.check_identities) worst[i] = identity_relative_error(s);
    }
  };

  const unsigned workers = std::max(1U, std::min<unsigned>(options.workers, static_cast<unsigned>(num_samples)));
  if (workers == 1) {
    run(0, num_samples);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (num_samples + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t b = w * chunk, e = std::min<std::uint64_t>(num_samples, b + chunk);
      if (b < e) pool.emplace_back(run, b, e);
    }
    for (auto& t : pool) t.join();
  }

  MCEstimate est;
  est.group = group;
  est.N = N;
  est.k = k;
  est.m = m;
  est.num_samples = num_samples;
  est.seed = seed;
  const double n = static_cast<double>(num_samples);
  est.mean = pairwise_sum(values) / n;
  if (num_samples > 1) {
    std::vector<double> dev(num_samples);
    for (std::size_t i = 0; i < num_samples; ++i) dev[i] = (values[i] - est.mean) * (values[i] - est.mean);
    est.std_error = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
  }
  for (auto r : redraws) est.resamples += r;
  est.identity_max_rel_error = *std::max_element(worst.begin(), worst.end());
  if (static_cast<int>(m) == derivative_order(group)) {
    est.prediction = to_double(moment_asymptotic(group, k, N));
    est.ratio = std::abs(est.mean) / *est.prediction;
  } else {
    est.prediction_flagged = true;
  }
  est.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return est;
}

}  // namespace dmoments
