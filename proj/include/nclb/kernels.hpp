#pragma once

// Component functions of the chain construction.
//
//   psi(x) = 0                          for x <= 1/2
//          = exp(1 - 1/(2x - 1)^2)       for x >  1/2
//   phi(x) = sqrt(e) * int_{-inf}^x exp(-t^2/2) dt
//
// Derivatives of every order k <= max_order() come from closed-form
// coefficient tables:
//   d^k/dt^k exp(-t^2/2) = (sum_i c_i^(k) t^i) exp(-t^2/2)
//   psi^(k)(x)           = (sum_{i=1..k} c_i^(k) / (2x-1)^(k+2i)) psi(x)
// Both tables are built once by their integer recurrences.

#include <vector>

namespace nclb {

inline constexpr int kDefaultMaxOrder = 8;
/// Largest order for which the integer recurrences are computed exactly.
inline constexpr int kMaxSupportedOrder = 12;

/// Row k holds c_0^(k) .. c_k^(k) of the Gaussian-derivative polynomial.
struct PhiCoeffs {
  std::vector<std::vector<double>> rows;
};

/// Row k holds c_1^(k) .. c_k^(k) (stored at index i-1); row 0 is empty.
struct PsiCoeffs {
  std::vector<std::vector<double>> rows;
};

PhiCoeffs make_phi_coeffs(int max_order);
PsiCoeffs make_psi_coeffs(int max_order);

/// Immutable coefficient tables plus the configured maximum order.
/// Safe to share between threads once constructed.
class KernelTables {
 public:
  explicit KernelTables(int max_order = kDefaultMaxOrder);

  int max_order() const { return max_order_; }
  const PhiCoeffs& phi_coeffs() const { return phi_; }
  const PsiCoeffs& psi_coeffs() const { return psi_; }

 private:
  int max_order_;
  PhiCoeffs phi_;
  PsiCoeffs psi_;
};

/// Tables with max_order = kDefaultMaxOrder, built on first use.
const KernelTables& default_kernel_tables();

double psi(double x);
double phi(double x);

/// k-th derivative of psi; k = 0 returns psi(x). Exactly 0 for x <= 1/2.
double psi_deriv(double x, int k, const KernelTables& tables = default_kernel_tables());

/// k-th derivative of phi; k = 0 returns phi(x).
double phi_deriv(double x, int k, const KernelTables& tables = default_kernel_tables());

enum class KernelKind { psi, phi };

/// Sup-norm bound on the k-th derivative used by validation sweeps.
/// k = 0, 1 use the range bounds (e, sqrt(54/e), sqrt(2 pi e), sqrt(e));
/// k >= 2 use exp(2.5 k log 4k) for psi and exp(1.5 k log 1.5k) for phi.
double kernel_bound(KernelKind kind, int k, const KernelTables& tables = default_kernel_tables());

}  // namespace nclb
