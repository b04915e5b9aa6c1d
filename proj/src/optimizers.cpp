#include "nclb/optimizers.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nclb/errors.hpp"
#include "nclb/random.hpp"

namespace nclb {

std::string to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::gd: return "gd";
    case OptimizerKind::cubic_newton: return "cubic_newton";
    case OptimizerKind::perturbed_gd: return "perturbed_gd";
  }
  return "unknown";
}

OptimizerKind parse_optimizer_kind(const std::string& name) {
  if (name == "gd") return OptimizerKind::gd;
  if (name == "cubic_newton" || name == "cubic") return OptimizerKind::cubic_newton;
  if (name == "perturbed_gd") return OptimizerKind::perturbed_gd;
  throw PreconditionError("unknown optimizer '" + name + "'");
}

void OptimizerConfig::validate() const {
  if (!(L > 0.0)) throw PreconditionError("optimizer L must be positive");
  if (max_iters < 1) throw PreconditionError("max_iters must be >= 1");
  if (!(eps >= 0.0)) throw PreconditionError("eps must be >= 0");
  if (!(noise_scale >= 0.0)) throw PreconditionError("noise_scale must be >= 0");
}

Vector gd_step(VectorRef x, VectorRef grad, double L) {
  if (!(L > 0.0)) throw PreconditionError("gd_step: L must be positive");
  if (x.size() != grad.size()) throw DimensionMismatch("gd_step: size mismatch");
  return x - grad / L;
}

double cubic_model(VectorRef g, MatrixRef H, double L, VectorRef s) {
  const double n = s.norm();
  return g.dot(s) + 0.5 * s.dot(H * s) + L / 6.0 * n * n * n;
}

namespace {

struct Secular {
  const Vector& w;   // eigenvalues, ascending
  const Vector& gh;  // gradient in the eigenbasis
  double L;

  double norm_s(double lambda, Eigen::Index skip) const {
    double sum = 0.0;
    for (Eigen::Index i = skip; i < w.size(); ++i) {
      if (gh[i] == 0.0) continue;
      const double q = gh[i] / (w[i] + lambda);
      sum += q * q;
    }
    return std::sqrt(sum);
  }
  // psi(lambda) = |s(lambda)| - 2 lambda / L and its derivative.
  double psi(double lambda) const { return norm_s(lambda, 0) - 2.0 * lambda / L; }
  double dpsi(double lambda) const {
    double sum2 = 0.0, sum3 = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (gh[i] == 0.0) continue;
      const double den = w[i] + lambda;
      sum2 += gh[i] * gh[i] / (den * den);
      sum3 += gh[i] * gh[i] / (den * den * den);
    }
    const double ns = std::sqrt(sum2);
    return (ns > 0.0 ? -sum3 / ns : 0.0) - 2.0 / L;
  }
};

}  // namespace

CubicSubproblemResult cubic_subproblem(VectorRef g, MatrixRef H, double L) {
  const Eigen::Index n = g.size();
  if (!(L > 0.0)) throw PreconditionError("cubic_subproblem: L must be positive");
  if (H.rows() != n || H.cols() != n) throw DimensionMismatch("cubic_subproblem: H shape");
  const double hscale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10 * hscale) {
    throw PreconditionError("cubic_subproblem: H is not symmetric");
  }

  CubicSubproblemResult out;
  out.step = Vector::Zero(n);

  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (g[i] != 0.0 || (H.row(i).array() != 0.0).any()) active.push_back(i);
  }
  if (active.empty()) return out;

  const auto m = static_cast<Eigen::Index>(active.size());
  Vector ga(m);
  Matrix Ha(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    ga[a] = g[active[a]];
    for (Eigen::Index b = 0; b < m; ++b) Ha(a, b) = 0.5 * (H(active[a], active[b]) + H(active[b], active[a]));
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(Ha);
  if (eig.info() != Eigen::Success) throw SolverError("cubic_subproblem: eigensolver failed");
  const Vector& w = eig.eigenvalues();
  const Matrix& V = eig.eigenvectors();
  const Vector gh = V.transpose() * ga;
  const double gnorm = ga.norm();
  const Secular sec{w, gh, L};

  const double lambda_lo = std::max(0.0, -w[0]);
  // Leftmost eigenspace, up to rounding of the eigenvalues.
  const double wtol = 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff());
  Eigen::Index k0 = 0;
  while (k0 < m && w[k0] <= w[0] + wtol) ++k0;
  const double g_on_min = gh.head(k0).norm();

  Vector sh(m);
  double lambda;
  if (g_on_min <= 1e-10 * gnorm && lambda_lo > 0.0) {
    const double ns_partial = sec.norm_s(lambda_lo, k0);
    const double target = 2.0 * lambda_lo / L;
    if (ns_partial < target) {
      out.hard_case = true;
      lambda = lambda_lo;
      sh.setZero();
      for (Eigen::Index i = k0; i < m; ++i) sh[i] = gh[i] == 0.0 ? 0.0 : -gh[i] / (w[i] + lambda);
      sh[0] = std::sqrt(target * target - ns_partial * ns_partial);
      const Vector sa = V * sh;
      for (Eigen::Index a = 0; a < m; ++a) out.step[active[a]] = sa[a];
      out.lambda = lambda;
      out.model_decrease = -cubic_model(g, H, L, out.step);
      return out;
    }
  }

  if (gnorm == 0.0) {
    // Here H is positive semidefinite on the active block: the minimizer is 0.
    return out;
  }

  // psi is convex and decreasing on (lambda_lo, inf); bracket its root.
  double lo = lambda_lo;
  double hi = lambda_lo + std::max(1.0, std::sqrt(L * gnorm));
  while (sec.psi(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw SolverError("cubic_subproblem: cannot bracket the root");
  }
  lambda = 0.5 * (lo + hi);
  bool converged = false;
  int it = 0;
  for (; it < 200; ++it) {
    const double f = sec.psi(lambda);
    const double ns = sec.norm_s(lambda, 0);
    if (std::abs(lambda - L * ns / 2.0) <= 1e-10 * std::max(1.0, lambda)) {
      converged = true;
      break;
    }
    if (f > 0.0) lo = lambda; else hi = lambda;
    const double d = sec.dpsi(lambda);
    double next = (d < 0.0 && std::isfinite(f)) ? lambda - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) {
      lambda = next;
      converged = std::abs(lambda - L * sec.norm_s(lambda, 0) / 2.0) <= 1e-8 * std::max(1.0, lambda);
      break;
    }
    lambda = next;
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "cubic_subproblem: secular equation did not converge after " << it
        << " iterations; bracket [" << format_real(lo) << ", " << format_real(hi)
        << "], lambda_min = " << format_real(w[0]) << ", |g| = " << format_real(gnorm);
    throw SolverError(msg.str());
  }
  for (Eigen::Index i = 0; i < m; ++i) sh[i] = gh[i] == 0.0 ? 0.0 : -gh[i] / (w[i] + lambda);
  const Vector sa = V * sh;
  for (Eigen::Index a = 0; a < m; ++a) out.step[active[a]] = sa[a];
  out.lambda = lambda;
  out.iterations = it;
  out.model_decrease = -cubic_model(g, H, L, out.step);
  return out;
}

Trace run_optimizer(const OptimizerConfig& config, const Instance& inst, VectorRef x0) {
  config.validate();
  if (x0.size() != inst.dim()) throw DimensionMismatch("run_optimizer: x0 has wrong length");
  Trace trace(config.seed);
  Oracle oracle(inst, trace);
  SeededRng rng(config.seed, config.stream);
  const int order = config.kind == OptimizerKind::cubic_newton ? 2 : 1;

  Vector x = x0;
  for (std::size_t t = 0; t < config.max_iters; ++t) {
    const OracleReply r = oracle.query(x, order);
    if (trace[trace.size() - 1].grad_norm <= config.eps) break;
    switch (config.kind) {
      case OptimizerKind::gd:
        x = gd_step(x, r.gradient, config.L);
        break;
      case OptimizerKind::perturbed_gd:
        x = gd_step(x, r.gradient, config.L);
        if (config.noise_scale > 0.0) x += config.noise_scale * rng.normal_vector(x.size());
        break;
      case OptimizerKind::cubic_newton:
        x += cubic_subproblem(r.gradient, *r.hessian, config.L).step;
        break;
    }
  }
  return trace;
}

}  // namespace nclb
