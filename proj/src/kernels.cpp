#include "nclb/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nclb/errors.hpp"

namespace nclb {

namespace {

using Int = __int128;

// exp() underflows to zero below this log-magnitude.
constexpr double kLogUnderflow = -745.0;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

void require_order(int k, const KernelTables& tables) {
  if (k < 0 || k > tables.max_order()) {
    throw UnsupportedOrder("derivative order " + std::to_string(k) + " outside [0, " +
                           std::to_string(tables.max_order()) + "]");
  }
}

// Neumaier-compensated sum. Terms are given as sign * exp(log_mag); when the
// pieces are comfortably inside the double range the term is formed directly
// as coeff * power * exp(log_base), which keeps exact cases exact.
class TermSum {
 public:
  void add(double coeff, double log_power, double power, double log_base) {
    const double log_mag = std::log(std::abs(coeff)) + log_power + log_base;
    if (log_mag < kLogUnderflow) return;
    double term;
    if (std::abs(log_power) < kDirectRange && log_base > -kDirectRange) {
      term = coeff * power * std::exp(log_base);
    } else {
      term = std::copysign(std::exp(log_mag), coeff * power);
    }
    push(term);
  }
  double value() const { return sum_ + comp_; }

 private:
  void push(double term) {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
  }

  static constexpr double kDirectRange = 600.0;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

PhiCoeffs make_phi_coeffs(int max_order) {
  if (max_order < 0 || max_order > kMaxSupportedOrder) {
    throw UnsupportedOrder("coefficient table order out of range");
  }
  std::vector<std::vector<Int>> exact{{1}};
  for (int k = 0; k < max_order; ++k) {
    const auto& prev = exact.back();
    std::vector<Int> next(k + 2, 0);
    for (int i = 0; i <= k + 1; ++i) {
      const Int up = (i + 1 <= k) ? Int(i + 1) * prev[i + 1] : 0;
      const Int down = (i >= 1) ? prev[i - 1] : 0;
      next[i] = up - down;
    }
    exact.push_back(std::move(next));
  }
  PhiCoeffs out;
  for (const auto& row : exact) {
    out.rows.emplace_back(row.begin(), row.end());
  }
  return out;
}

PsiCoeffs make_psi_coeffs(int max_order) {
  if (max_order < 0 || max_order > kMaxSupportedOrder) {
    throw UnsupportedOrder("coefficient table order out of range");
  }
  // exact[k][i] holds c_i^(k) for i = 0..k+1 with c_0 = c_{k+1} = 0 padding.
  std::vector<std::vector<Int>> exact{{0, 0}};
  if (max_order >= 1) exact.push_back({0, 4, 0});
  for (int k = 1; k < max_order; ++k) {
    const auto& prev = exact.back();
    std::vector<Int> next(k + 3, 0);
    for (int i = 1; i <= k + 1; ++i) {
      next[i] = 4 * prev[i - 1] - Int(2 * (k + 2 * i)) * prev[i];
    }
    exact.push_back(std::move(next));
  }
  PsiCoeffs out;
  for (std::size_t k = 0; k < exact.size(); ++k) {
    std::vector<double> row;
    for (std::size_t i = 1; i <= k; ++i) row.push_back(static_cast<double>(exact[k][i]));
    out.rows.push_back(std::move(row));
  }
  return out;
}

KernelTables::KernelTables(int max_order)
    : max_order_(max_order), phi_(make_phi_coeffs(max_order)), psi_(make_psi_coeffs(max_order)) {}

const KernelTables& default_kernel_tables() {
  static const KernelTables tables(kDefaultMaxOrder);
  return tables;
}

double psi(double x) {
  require_finite(x, "psi");
  if (x <= 0.5) return 0.0;
  const double u = 2.0 * x - 1.0;
  return std::exp(1.0 - 1.0 / (u * u));
}

double phi(double x) {
  require_finite(x, "phi");
  // erfc keeps full relative accuracy in the left tail; the true value is
  // positive everywhere, so underflow is flushed to the smallest subnormal.
  static const double scale = std::sqrt(std::numbers::e * std::numbers::pi / 2.0);
  const double v = scale * std::erfc(-x / std::numbers::sqrt2);
  return v > 0.0 ? v : std::numeric_limits<double>::denorm_min();
}

double psi_deriv(double x, int k, const KernelTables& tables) {
  require_finite(x, "psi_deriv");
  require_order(k, tables);
  if (k == 0) return psi(x);
  if (x <= 0.5) return 0.0;

  const double u = 2.0 * x - 1.0;
  const double log_u = std::log(u);
  const double log_psi = 1.0 - 1.0 / (u * u);
  const auto& row = tables.psi_coeffs().rows[k];
  TermSum sum;
  for (int i = 1; i <= k; ++i) {
    const double c = row[i - 1];
    if (c == 0.0) continue;
    const int n = k + 2 * i;
    const double log_power = -n * log_u;
    const double power = std::abs(log_power) < 600.0 ? std::pow(u, -n) : 1.0;
    sum.add(c, log_power, power, log_psi);
  }
  return sum.value();
}

double phi_deriv(double x, int k, const KernelTables& tables) {
  require_finite(x, "phi_deriv");
  require_order(k, tables);
  if (k == 0) return phi(x);

  // phi^(k)(x) = sqrt(e) * (sum_i c_i^(k-1) x^i) * exp(-x^2/2)
  const auto& row = tables.phi_coeffs().rows[k - 1];
  const double log_gauss = 0.5 - 0.5 * x * x;
  const double log_abs_x = std::log(std::abs(x));
  TermSum sum;
  for (int i = 0; i < static_cast<int>(row.size()); ++i) {
    const double c = row[i];
    if (c == 0.0) continue;
    if (i > 0 && x == 0.0) continue;
    const double log_power = i == 0 ? 0.0 : i * log_abs_x;
    const double power = std::abs(log_power) < 600.0 ? std::pow(x, i) : (x < 0 && i % 2 ? -1.0 : 1.0);
    sum.add(c, log_power, power, log_gauss);
  }
  const double v = sum.value();
  // phi' is strictly positive; keep the sign when the value underflows.
  if (k == 1 && v <= 0.0) return std::numeric_limits<double>::denorm_min();
  return v;
}

double kernel_bound(KernelKind kind, int k, const KernelTables& tables) {
  require_order(k, tables);
  const double e = std::numbers::e;
  if (kind == KernelKind::psi) {
    if (k == 0) return e;
    if (k == 1) return std::sqrt(54.0 / e);
    return std::exp(2.5 * k * std::log(4.0 * k));
  }
  if (k == 0) return std::sqrt(2.0 * std::numbers::pi * e);
  if (k == 1) return std::sqrt(e);
  return std::exp(1.5 * k * std::log(1.5 * k));
}

}  // namespace nclb
