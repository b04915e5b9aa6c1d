#include "nclb/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "nclb/errors.hpp"

namespace nclb {

namespace {

// Orthonormal basis grown one vector at a time.
class Basis {
 public:
  explicit Basis(Eigen::Index dim) : Q_(dim, 0) {}

  Eigen::Index dim() const { return Q_.rows(); }
  Eigen::Index rank() const { return Q_.cols(); }
  const Matrix& matrix() const { return Q_; }

  Vector residual(Vector v) const {
    for (int pass = 0; pass < 2; ++pass) {
      if (Q_.cols() > 0) v -= Q_ * (Q_.transpose() * v);
    }
    return v;
  }

  // Appends the normalized residual of v when it is not already in the span.
  void absorb(const Vector& v) {
    const double scale = v.norm();
    if (scale == 0.0) return;
    Vector r = residual(v);
    if (r.norm() <= 1e-12 * scale) return;
    append(r / r.norm());
  }

  void append(const Vector& unit) {
    Q_.conservativeResize(Eigen::NoChange, Q_.cols() + 1);
    Q_.col(Q_.cols() - 1) = unit;
  }

  Vector fresh_direction() const {
    if (rank() >= dim()) throw SolverError("extend_orthonormal: orthogonal complement is empty");
    Eigen::Index best = 0;
    double best_res = -1.0;
    for (Eigen::Index k = 0; k < dim(); ++k) {
      const double res = 1.0 - (rank() > 0 ? Q_.row(k).squaredNorm() : 0.0);
      if (res > best_res) {
        best_res = res;
        best = k;
      }
    }
    Vector e = Vector::Zero(dim());
    e[best] = 1.0;
    Vector r = residual(e);
    double n = r.norm();
    if (n < 1e-8) {
      r = residual(r / n);
      n = r.norm();
      if (n < 1e-8) throw SolverError("extend_orthonormal: complement numerically rank deficient");
    }
    return r / n;
  }

 private:
  Matrix Q_;
};

double rel_dev(double served, double fresh) {
  return std::abs(served - fresh) / std::max(1.0, std::abs(fresh));
}

double rel_dev(const Matrix& served, const Matrix& fresh) {
  return (served - fresh).norm() / std::max(1.0, fresh.norm());
}

}  // namespace

Matrix extend_orthonormal(const Matrix& basis, const std::vector<Vector>& constraints, int count) {
  const Eigen::Index d = basis.rows() > 0 ? basis.rows()
                                          : (constraints.empty() ? 0 : constraints.front().size());
  if (d == 0) throw PreconditionError("extend_orthonormal: unknown ambient dimension");
  if (count < 0) throw PreconditionError("extend_orthonormal: negative count");
  Basis span(d);
  for (Eigen::Index j = 0; j < basis.cols(); ++j) span.absorb(basis.col(j));
  for (const auto& c : constraints) {
    if (c.size() != d) throw DimensionMismatch("extend_orthonormal: constraint length");
    span.absorb(c);
  }
  Matrix out(d, count);
  for (int k = 0; k < count; ++k) {
    const Vector u = span.fresh_direction();
    out.col(k) = u;
    span.append(u);
  }
  return out;
}

AdversaryResult run_resisting(const DeterministicAlgorithm& algorithm, const PlainInstance& base,
                              int T0, int order) {
  if (T0 < 1) throw PreconditionError("run_resisting: T0 must be >= 1");
  if (order < 1 || order > 2) throw UnsupportedOrder("run_resisting: order must be 1 or 2");
  const int d = base.dim();
  const int dp = d + T0;
  const Instance base_inst(base);

  AdversaryResult res;
  res.U = Matrix::Zero(dp, d);
  res.assigned_step.assign(d, -1);
  Basis span(dp);
  std::vector<ServedQuery> history;
  std::vector<Vector> inner_points;

  for (int t = 1; t <= T0; ++t) {
    const std::optional<Vector> next = algorithm(std::span<const ServedQuery>(history));
    if (!next) break;
    const Vector& a = *next;
    if (a.size() != dp) {
      throw DimensionMismatch("run_resisting: algorithm returned length " +
                              std::to_string(a.size()) + ", expected " + std::to_string(dp));
    }
    span.absorb(a);

    // Unassigned columns are orthogonal to every query, so they read as 0.
    Vector z = Vector::Zero(d);
    for (int i = 0; i < d; ++i) {
      if (res.assigned_step[i] >= 0) z[i] = res.U.col(i).dot(a);
    }
    for (int i : derivative_support(base_inst, z, order)) {
      if (res.assigned_step[i] >= 0) continue;
      const Vector u = span.fresh_direction();
      res.U.col(i) = u;
      res.assigned_step[i] = t;
      span.append(u);
    }

    const OracleReply inner = evaluate(base_inst, z, order);
    OracleReply outer;
    outer.order = order;
    outer.value = inner.value;
    outer.gradient = res.U * inner.gradient;
    if (order == 2) outer.hessian = res.U * *inner.hessian * res.U.transpose();

    res.inner.append(z, inner);
    res.outer.append(a, outer);
    history.push_back({a, std::move(outer)});
    inner_points.push_back(std::move(z));
    if (t == T0) res.horizon_exhausted = true;
  }

  for (int i = 0; i < d; ++i) {
    if (res.assigned_step[i] >= 0) continue;
    const Vector u = span.fresh_direction();
    res.U.col(i) = u;
    res.assigned_step[i] = 0;
    span.append(u);
  }

  // Post-hoc: every served reply must agree with f(U^T x) for the final U.
  double worst = 0.0;
  for (const auto& q : history) {
    const Vector z = res.U.transpose() * q.point;
    const OracleReply fresh = evaluate(base_inst, z, order);
    worst = std::max(worst, rel_dev(q.reply.value, fresh.value));
    worst = std::max(worst, rel_dev(Matrix(q.reply.gradient), Matrix(res.U * fresh.gradient)));
    if (order == 2) {
      worst = std::max(worst, rel_dev(*q.reply.hessian,
                                      Matrix(res.U * *fresh.hessian * res.U.transpose())));
    }
  }
  res.consistency_error = worst;
  return res;
}

DeterministicAlgorithm gd_algorithm(Vector x0, double L, double eps) {
  if (!(L > 0.0)) throw PreconditionError("gd_algorithm: L must be positive");
  return [x0 = std::move(x0), L, eps](std::span<const ServedQuery> h) -> std::optional<Vector> {
    if (h.empty()) return x0;
    const ServedQuery& last = h.back();
    if (last.reply.gradient.norm() <= eps) return std::nullopt;
    return Vector(last.point - last.reply.gradient / L);
  };
}

DeterministicAlgorithm constant_algorithm(Vector point) {
  return [point = std::move(point)](std::span<const ServedQuery>) -> std::optional<Vector> {
    return point;
  };
}

}  // namespace nclb
