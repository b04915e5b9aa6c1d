#pragma once

// Regularized Taylor-model methods for p = 1 (gradient descent, step 1/L)
// and p = 2 (cubic-regularized Newton), plus a noisy gradient baseline.

#include <cstddef>
#include <cstdint>
#include <string>

#include "nclb/instances.hpp"
#include "nclb/oracle.hpp"

namespace nclb {

enum class OptimizerKind { gd, cubic_newton, perturbed_gd };

std::string to_string(OptimizerKind kind);
/// Accepts gd, cubic_newton (or cubic), perturbed_gd; throws PreconditionError otherwise.
OptimizerKind parse_optimizer_kind(const std::string& name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::gd;
  double L = 1.0;
  std::size_t max_iters = 1000;
  double eps = 0.0;          // stop once a queried gradient has norm <= eps
  double noise_scale = 0.0;  // perturbed_gd only
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  void validate() const;
};

/// x - grad / L.
Vector gd_step(VectorRef x, VectorRef grad, double L);

struct CubicSubproblemResult {
  Vector step;
  double lambda = 0.0;          // equals L |step| / 2 at the solution
  double model_decrease = 0.0;  // -m(step) >= 0
  bool hard_case = false;
  int iterations = 0;
};

/// m(s) = <g, s> + s^T H s / 2 + (L/6) |s|^3.
double cubic_model(VectorRef g, MatrixRef H, double L, VectorRef s);

/// Global minimizer of the cubic model. Coordinates with zero gradient and
/// an identically zero Hessian row are fixed at 0 first; the rest is solved by
/// eigendecomposition and a safeguarded Newton/bisection search on
/// |s(lambda)| = 2 lambda / L, with the hard case completed along the
/// leftmost eigenvector.
CubicSubproblemResult cubic_subproblem(VectorRef g, MatrixRef H, double L);

/// Queries x^(1) = x0, x^(2), ... until a gradient norm <= eps is logged or
/// max_iters queries were made. The returned trace carries config.seed.
Trace run_optimizer(const OptimizerConfig& config, const Instance& inst, VectorRef x0);

}  // namespace nclb
