#pragma once

// Resisting oracle: plays a deterministic algorithm against x -> f(U^T x)
// while choosing the columns of U on the fly, so that the algorithm's view
// U^T x of its own iterates is a zero-respecting trace on f.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nclb/instances.hpp"
#include "nclb/oracle.hpp"

namespace nclb {

/// A point the algorithm queried together with the reply it was served.
struct ServedQuery {
  Vector point;
  OracleReply reply;
};

/// Next query given the history (empty for the first query); nullopt stops.
using DeterministicAlgorithm =
    std::function<std::optional<Vector>(std::span<const ServedQuery> history)>;

/// Returns `count` unit vectors orthogonal to each other, to the columns of
/// `basis` (assumed orthonormal) and to every vector in `constraints`.
/// Each new vector starts from the standard basis vector with the largest
/// residual and is orthogonalized by two Gram-Schmidt passes. Throws
/// SolverError when the orthogonal complement is (numerically) exhausted.
Matrix extend_orthonormal(const Matrix& basis, const std::vector<Vector>& constraints, int count);

struct AdversaryResult {
  Matrix U;  // (d + T0) x d, orthonormal columns
  Trace outer;
  Trace inner;
  std::vector<int> assigned_step;  // 1-based query at which column i was fixed; 0 = completion
  bool horizon_exhausted = false;
  /// Largest relative deviation between served derivatives and those of
  /// x -> f(U^T x) recomputed with the final U.
  double consistency_error = 0.0;
};

/// Runs `algorithm` for at most T0 queries against the resisting oracle built
/// on `base`. `order` is 1 (values and gradients) or 2 (adds Hessians).
AdversaryResult run_resisting(const DeterministicAlgorithm& algorithm, const PlainInstance& base,
                              int T0, int order = 1);

/// Gradient descent x <- x - g / L from x0, stopping once |g| <= eps.
DeterministicAlgorithm gd_algorithm(Vector x0, double L, double eps);

/// Always queries the same point.
DeterministicAlgorithm constant_algorithm(Vector point);

}  // namespace nclb
