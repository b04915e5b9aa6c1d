#include "nclb/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "nclb/errors.hpp"

namespace nclb {

std::array<std::uint64_t, 2> philox2x64(std::array<std::uint64_t, 2> ctr, std::uint64_t key) {
  constexpr std::uint64_t kMul = 0xD2B74407B1CE6E93ULL;
  constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;
  for (int round = 0; round < 10; ++round) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(kMul) * ctr[0];
    const auto hi = static_cast<std::uint64_t>(prod >> 64);
    const auto lo = static_cast<std::uint64_t>(prod);
    ctr = {hi ^ key ^ ctr[1], lo};
    key += kWeyl;
  }
  return ctr;
}

std::uint64_t SeededRng::next_u64() {
  if (used_ == 2) {
    block_ = philox2x64({counter_, stream_}, seed_);
    ++counter_;
    used_ = 0;
  }
  return block_[used_++];
}

double SeededRng::uniform() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double SeededRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_normal_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Eigen::VectorXd SeededRng::normal_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Eigen::MatrixXd SeededRng::normal_matrix(Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal();
  return m;
}

Eigen::MatrixXd sample_orthogonal(int d, int T, SeededRng& rng) {
  if (T < 1 || d < T) throw PreconditionError("sample_orthogonal needs d >= T >= 1");
  const Eigen::MatrixXd G = rng.normal_matrix(d, T);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d, T);
  const Eigen::MatrixXd& R = qr.matrixQR();
  for (int j = 0; j < T; ++j) {
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  }
  return Q;
}

Eigen::MatrixXd complete_orthogonal(const Eigen::MatrixXd& Q) {
  const Eigen::Index d = Q.rows();
  const Eigen::Index k = Q.cols();
  if (k > d) throw PreconditionError("complete_orthogonal: more columns than rows");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Q);
  Eigen::MatrixXd full = qr.householderQ();
  full.leftCols(k) = Q;
  return full;
}

SphereTail sphere_marginal_tail(int d, double alpha, std::size_t n_samples, SeededRng& rng) {
  if (d < 2) throw PreconditionError("sphere_marginal_tail needs d >= 2");
  if (!(alpha > 0.0) || alpha > 1.0) throw PreconditionError("alpha must lie in (0, 1]");
  if (n_samples == 0) throw PreconditionError("need at least one sample");
  std::size_t hits = 0;
  const double a2 = alpha * alpha;
  for (std::size_t s = 0; s < n_samples; ++s) {
    double first = rng.normal();
    double sq = first * first;
    for (int i = 1; i < d; ++i) {
      const double z = rng.normal();
      sq += z * z;
    }
    if (first * first > a2 * sq) ++hits;
  }
  SphereTail out;
  out.samples = n_samples;
  out.fraction = static_cast<double>(hits) / static_cast<double>(n_samples);
  out.bound = 2.0 * std::exp(-d * a2 / 2.0);
  out.sigma_hat = std::sqrt(out.fraction * (1.0 - out.fraction) / static_cast<double>(n_samples));
  return out;
}

double circle_marginal_tail(double alpha) {
  return 1.0 - 2.0 / std::numbers::pi * std::asin(alpha);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double level) {
  if (a.empty() || b.empty()) throw PreconditionError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double stat = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    stat = std::max(stat, std::abs(i / n - j / m));
  }
  KsResult out;
  out.statistic = stat;
  out.critical = std::sqrt(-std::log(level / 2.0) / 2.0) * std::sqrt((n + m) / (n * m));
  out.reject = stat > out.critical;
  return out;
}

}  // namespace nclb
