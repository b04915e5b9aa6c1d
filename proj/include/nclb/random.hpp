#pragma once

// Reproducible randomness: a Philox2x64-10 counter-based generator, Haar
// sampling on O(d, T) and sphere-marginal utilities.

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace nclb {

/// Philox2x64 with 10 rounds. The (key, counter) pair fully determines output.
std::array<std::uint64_t, 2> philox2x64(std::array<std::uint64_t, 2> counter, std::uint64_t key);

/// Stream of draws keyed by (seed, stream); position tracked by a block counter.
/// Normals use Box-Muller on 53-bit uniforms so that results do not depend
/// on the standard library's distribution implementations.
class SeededRng {
 public:
  static constexpr const char* kAlgorithm = "philox2x64-10";

  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  /// Uniform on (0, 1].
  double uniform();
  double normal();
  Eigen::VectorXd normal_vector(Eigen::Index n);
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> block_{};
  int used_ = 2;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Haar-distributed d x T matrix with orthonormal columns: Gaussian matrix,
/// thin QR, columns flipped so that diag(R) > 0 (plain QR is not Haar).
Eigen::MatrixXd sample_orthogonal(int d, int T, SeededRng& rng);

/// Completes a d x k orthonormal block to a full d x d orthogonal matrix.
Eigen::MatrixXd complete_orthogonal(const Eigen::MatrixXd& Q);

struct SphereTail {
  double fraction = 0.0;  // empirical P(|v_1| > alpha)
  double bound = 0.0;     // 2 exp(-d alpha^2 / 2)
  double sigma_hat = 0.0; // binomial standard error of the fraction
  std::size_t samples = 0;
};

/// Empirical tail of the first coordinate of a uniform unit vector in R^d.
SphereTail sphere_marginal_tail(int d, double alpha, std::size_t n_samples, SeededRng& rng);

/// Exact P(|v_1| > alpha) on the circle: 1 - (2/pi) asin(alpha).
double circle_marginal_tail(double alpha);

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;  // rejection threshold at the requested level
  bool reject = false;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic critical value
/// sqrt(-log(level/2)/2) * sqrt((n+m)/(n m)).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double level);

}  // namespace nclb
