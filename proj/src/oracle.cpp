#include "nclb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nclb/errors.hpp"
#include "nclb/kernels.hpp"

namespace nclb {

OracleReply evaluate(const Instance& inst, VectorRef x, int order) {
  if (order < 1 || order > 2) {
    throw UnsupportedOrder("oracle order " + std::to_string(order) + " not in {1, 2}");
  }
  if (x.size() != inst.dim()) {
    throw DimensionMismatch("query of length " + std::to_string(x.size()) + " for dimension " +
                            std::to_string(inst.dim()));
  }
  OracleReply r;
  r.order = order;
  r.value = inst.value(x);
  r.gradient = inst.grad(x);
  if (order >= 2) r.hessian = inst.hessian(x);
  return r;
}

void Trace::append(VectorRef x, const OracleReply& reply) {
  if (records_.size() >= capacity_) {
    throw PreconditionError("trace capacity of " + std::to_string(capacity_) + " exceeded");
  }
  records_.push_back({x, reply.value, reply.gradient, reply.gradient.norm(), reply.order});
}

std::vector<double> Trace::grad_norms() const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.grad_norm);
  return out;
}

OracleReply Oracle::query(VectorRef x, int order) {
  OracleReply r = evaluate(*inst_, x, order);
  trace_->append(x, r);
  return r;
}

std::optional<std::size_t> t_eps(const std::vector<double>& grad_norms, double eps) {
  for (std::size_t i = 0; i < grad_norms.size(); ++i) {
    if (grad_norms[i] <= eps) return i + 1;
  }
  return std::nullopt;
}

std::optional<std::size_t> t_eps(const Trace& trace, double eps) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].grad_norm <= eps) return i + 1;
  }
  return std::nullopt;
}

std::vector<int> derivative_support(const Instance& inst, VectorRef x, int p) {
  const auto* plain = inst.plain();
  if (!plain) {
    throw UnsupportedVariant("derivative support is only defined for the plain instance");
  }
  if (p < 1 || p > kDefaultMaxOrder) {
    throw UnsupportedOrder("support order " + std::to_string(p) + " out of range");
  }
  // Every order shares the band structure, so the active set does not depend on p.
  if (plain->sigma == 1.0) return fbar_active_coordinates(plain->T, x);
  return fbar_active_coordinates(plain->T, x / plain->sigma);
}

std::optional<ZeroRespectingViolation> check_zero_respecting(const std::vector<Vector>& points,
                                                            const Instance& inst, int p) {
  std::vector<char> known(inst.dim(), 0);
  for (std::size_t t = 0; t < points.size(); ++t) {
    const Vector& x = points[t];
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      if (x[j] != 0.0 && !known[j]) return ZeroRespectingViolation{t + 1, static_cast<int>(j)};
    }
    for (int j : derivative_support(inst, x, p)) known[j] = 1;
  }
  return std::nullopt;
}

std::optional<ZeroRespectingViolation> check_zero_respecting(const Trace& trace,
                                                            const Instance& inst, int p) {
  std::vector<Vector> points;
  points.reserve(trace.size());
  for (const auto& r : trace.records()) points.push_back(r.point);
  return check_zero_respecting(points, inst, p);
}

}  // namespace nclb
