#include "nclb/instances.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nclb/errors.hpp"
#include "nclb/kernels.hpp"

namespace nclb {

namespace {

void require_dim(int T, VectorRef x, const char* what) {
  if (T < 1) throw PreconditionError(std::string(what) + ": T must be >= 1");
  if (x.size() != T) {
    throw DimensionMismatch(std::string(what) + ": expected length " + std::to_string(T) +
                            ", got " + std::to_string(x.size()));
  }
}

// Left end of link i: x[i-1], with the fixed boundary x[-1] = 1.
double link_left(VectorRef x, int i) { return i == 0 ? 1.0 : x[i - 1]; }

// Mixed partial d^m/da^m d^n/db^n of the link g(a, b) = psi(-a)phi(-b) - psi(a)phi(b).
// At most one of psi(a), psi(-a) is non-zero; with s = sign(a) on the active
// side, g = -s psi(s a) phi(s b) and each derivative brings out one factor s.
double link_partial(double a, double b, int m, int n) {
  double s;
  if (a > 0.5) {
    s = 1.0;
  } else if (a < -0.5) {
    s = -1.0;
  } else {
    return 0.0;
  }
  const double sign = ((1 + m + n) % 2 == 0) ? 1.0 : s;
  return -sign * psi_deriv(s * a, m) * phi_deriv(s * b, n);
}

}  // namespace

Matrix SymTridiagonal::dense() const {
  const Eigen::Index n = size();
  Matrix out = Matrix::Zero(n, n);
  out.diagonal() = diag;
  if (n > 1) {
    out.diagonal(1) = off;
    out.diagonal(-1) = off;
  }
  return out;
}

Vector SymTridiagonal::operator*(const Vector& v) const {
  Vector out = diag.cwiseProduct(v);
  const Eigen::Index n = size();
  if (n > 1) {
    out.head(n - 1) += off.cwiseProduct(v.tail(n - 1));
    out.tail(n - 1) += off.cwiseProduct(v.head(n - 1));
  }
  return out;
}

double fbar_value(int T, VectorRef x) {
  require_dim(T, x, "fbar_value");
  double sum = -phi(x[0]);
  for (int i = 1; i < T; ++i) sum += link_partial(x[i - 1], x[i], 0, 0);
  return sum;
}

Vector fbar_grad(int T, VectorRef x) {
  require_dim(T, x, "fbar_grad");
  Vector g(T);
  for (int i = 0; i < T; ++i) {
    double gi = link_partial(link_left(x, i), x[i], 0, 1);
    if (i + 1 < T) gi += link_partial(x[i], x[i + 1], 1, 0);
    g[i] = gi;
  }
  return g;
}

SymTridiagonal fbar_hess(int T, VectorRef x) {
  require_dim(T, x, "fbar_hess");
  SymTridiagonal H{Vector(T), Vector(T - 1)};
  for (int i = 0; i < T; ++i) {
    double hii = link_partial(link_left(x, i), x[i], 0, 2);
    if (i + 1 < T) {
      hii += link_partial(x[i], x[i + 1], 2, 0);
      H.off[i] = link_partial(x[i], x[i + 1], 1, 1);
    }
    H.diag[i] = hii;
  }
  return H;
}

std::optional<int> large_gradient_witness(int T, VectorRef x) {
  require_dim(T, x, "large_gradient_witness");
  for (int j = 0; j < T; ++j) {
    if (std::abs(x[j]) < 1.0) return j;
  }
  return std::nullopt;
}

std::vector<int> fbar_active_coordinates(int T, VectorRef x) {
  require_dim(T, x, "fbar_active_coordinates");
  std::vector<int> out;
  for (int i = 0; i < T; ++i) {
    const bool left = std::abs(link_left(x, i)) > 0.5;
    const bool right = i + 1 < T && std::abs(x[i]) > 0.5;
    if (left || right) out.push_back(i);
  }
  return out;
}

Vector SoftProjection::apply_jacobian(VectorRef v) const {
  return inv_scale * (v - rho * (rho.dot(v) / (radius * radius)));
}

Matrix SoftProjection::jacobian() const {
  const Eigen::Index n = rho.size();
  return inv_scale * (Matrix::Identity(n, n) - rho * rho.transpose() / (radius * radius));
}

SoftProjection soft_project(VectorRef x, double radius) {
  if (!(radius > 0.0)) throw PreconditionError("soft_project: radius must be positive");
  SoftProjection out;
  out.radius = radius;
  out.inv_scale = 1.0 / std::sqrt(1.0 + x.squaredNorm() / (radius * radius));
  out.rho = out.inv_scale * x;
  return out;
}

double default_radius(int T) { return 230.0 * std::sqrt(static_cast<double>(T)); }

double bump_value(int T, VectorRef y) {
  require_dim(T, y, "bump_value");
  Vector shifted = y;
  shifted[T - 1] -= 0.8;
  return psi(1.0 - 12.5 * shifted.squaredNorm());
}

Vector bump_grad(int T, VectorRef y) {
  require_dim(T, y, "bump_grad");
  Vector shifted = y;
  shifted[T - 1] -= 0.8;
  const double arg = 1.0 - 12.5 * shifted.squaredNorm();
  return (-25.0 * psi_deriv(arg, 1)) * shifted;
}

// ---------------------------------------------------------------------------

PlainInstance::PlainInstance(int T_, double sigma_, double multiplier_, int p_)
    : T(T_), sigma(sigma_), multiplier(multiplier_), p(p_) {
  if (T < 1) throw PreconditionError("PlainInstance: T must be >= 1");
  if (!(sigma > 0.0) || !(multiplier > 0.0)) {
    throw PreconditionError("PlainInstance: sigma and multiplier must be positive");
  }
}

double PlainInstance::value(VectorRef x) const {
  if (sigma == 1.0) return multiplier * fbar_value(T, x);
  return multiplier * fbar_value(T, x / sigma);
}

Vector PlainInstance::grad(VectorRef x) const {
  if (sigma == 1.0) return multiplier * fbar_grad(T, x);
  return (multiplier / sigma) * fbar_grad(T, x / sigma);
}

SymTridiagonal PlainInstance::hess(VectorRef x) const {
  SymTridiagonal H = sigma == 1.0 ? fbar_hess(T, x) : fbar_hess(T, x / sigma);
  const double c = multiplier / (sigma * sigma);
  H.diag *= c;
  H.off *= c;
  return H;
}

RotatedInstance::RotatedInstance(Matrix U_, double radius_, double sigma_, double multiplier_,
                                 int p_, std::uint64_t seed_)
    : U(std::move(U_)), radius(radius_), sigma(sigma_), multiplier(multiplier_), p(p_),
      seed(seed_) {
  if (U.cols() < 1 || U.rows() < U.cols()) {
    throw PreconditionError("RotatedInstance: U must be d x T with d >= T >= 1");
  }
  const Matrix gram = U.transpose() * U;
  const double err = (gram - Matrix::Identity(U.cols(), U.cols())).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw PreconditionError("RotatedInstance: U^T U deviates from I by " + format_real(err));
  }
  if (radius <= 0.0) radius = default_radius(T());
  if (!(sigma > 0.0) || !(multiplier > 0.0)) {
    throw PreconditionError("RotatedInstance: sigma and multiplier must be positive");
  }
}

double RotatedInstance::value(VectorRef x) const {
  if (x.size() != dim()) throw DimensionMismatch("RotatedInstance::value: wrong dimension");
  const Vector z = x / sigma;
  const SoftProjection proj = soft_project(z, radius);
  const Vector y = U.transpose() * proj.rho;
  return multiplier * (fbar_value(T(), y) + z.squaredNorm() / 10.0);
}

Vector RotatedInstance::grad(VectorRef x) const {
  if (x.size() != dim()) throw DimensionMismatch("RotatedInstance::grad: wrong dimension");
  const Vector z = x / sigma;
  const SoftProjection proj = soft_project(z, radius);
  const Vector y = U.transpose() * proj.rho;
  const Vector inner = U * fbar_grad(T(), y);
  return (multiplier / sigma) * (proj.apply_jacobian(inner) + z / 5.0);
}

DistanceInstance::DistanceInstance(RotatedInstance body_, double D_)
    : body(std::move(body_)), D(D_) {
  if (!(D > 0.0)) throw PreconditionError("DistanceInstance: D must be positive");
  if (body.sigma > D) throw PreconditionError("DistanceInstance: sigma exceeds D");
  bump_scale = body.multiplier * std::pow(D / body.sigma, body.p + 1);
}

double DistanceInstance::value(VectorRef x) const {
  const double main = body.value(x);
  const Vector y = body.U.transpose() * x / D;
  return main - bump_scale * bump_value(T(), y);
}

Vector DistanceInstance::grad(VectorRef x) const {
  Vector g = body.grad(x);
  const Vector y = body.U.transpose() * x / D;
  g -= (bump_scale / D) * (body.U * bump_grad(T(), y));
  return g;
}

// ---------------------------------------------------------------------------

std::string Instance::variant_name() const {
  switch (storage_.index()) {
    case 0: return "plain";
    case 1: return "rotated";
    default: return "distance";
  }
}

int Instance::dim() const {
  return std::visit([](const auto& inst) { return inst.dim(); }, storage_);
}

int Instance::chain_length() const {
  if (const auto* p = plain()) return p->T;
  if (const auto* r = rotated()) return r->T();
  return distance()->T();
}

double Instance::scale() const {
  if (const auto* p = plain()) return p->sigma;
  if (const auto* r = rotated()) return r->sigma;
  return distance()->sigma();
}

double Instance::value(VectorRef x) const {
  return std::visit([&](const auto& inst) { return inst.value(x); }, storage_);
}

Vector Instance::grad(VectorRef x) const {
  return std::visit([&](const auto& inst) { return Vector(inst.grad(x)); }, storage_);
}

Matrix Instance::hessian(VectorRef x) const {
  if (const auto* p = plain()) return p->hess(x).dense();
  const Eigen::Index n = dim();
  if (x.size() != n) throw DimensionMismatch("Instance::hessian: wrong dimension");
  const double h = 1e-5 * scale();
  Matrix H(n, n);
  Vector xp = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double saved = xp[j];
    xp[j] = saved + h;
    const Vector gp = grad(xp);
    xp[j] = saved - h;
    H.col(j) = (gp - grad(xp)) / (2.0 * h);
    xp[j] = saved;
  }
  return 0.5 * (H + H.transpose());
}

int Instance::analytic_order() const { return plain() ? 2 : 1; }

// ---------------------------------------------------------------------------

std::string to_string(ScalingVariant v) {
  switch (v) {
    case ScalingVariant::deterministic: return "deterministic";
    case ScalingVariant::randomized: return "randomized";
    case ScalingVariant::distance: return "distance";
  }
  return "unknown";
}

ScalingVariant parse_scaling_variant(const std::string& name) {
  if (name == "deterministic" || name == "det") return ScalingVariant::deterministic;
  if (name == "randomized" || name == "rand") return ScalingVariant::randomized;
  if (name == "distance" || name == "dist") return ScalingVariant::distance;
  throw UnsupportedVariant("unknown scaling variant '" + name + "'");
}

double chain_lipschitz_constant(int p) {
  if (p < 1) throw PreconditionError("Lipschitz constant needs p >= 1");
  return std::exp(2.5 * p * std::log(static_cast<double>(p)) + 5.0 * p + 10.0);
}

double rotated_lipschitz_constant(int p) { return chain_lipschitz_constant(p) * std::exp(5.0 * p); }

double construction_constant(ScalingVariant v, int p) {
  return v == ScalingVariant::deterministic ? chain_lipschitz_constant(p)
                                            : rotated_lipschitz_constant(p);
}

double ScalingParams::gradient_scale() const { return lip * std::pow(sigma, p) / ell; }

namespace {

void check_scaling_inputs(int p, double budget, double lip, double eps, double ell) {
  if (p < 1 || p > kDefaultMaxOrder - 1) {
    throw PreconditionError("p must lie in [1, " + std::to_string(kDefaultMaxOrder - 1) + "]");
  }
  if (!(budget > 0.0)) throw PreconditionError("budget must be positive");
  if (!(lip > 0.0)) throw PreconditionError("Lipschitz constant must be positive");
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  if (!(ell > 0.0)) throw PreconditionError("construction constant must be positive");
}

// Unfloored horizon for each variant.
double raw_horizon(ScalingVariant variant, int p, double budget, double lip, double eps,
                   double ell, double sigma) {
  const double inv_p = 1.0 / p;
  switch (variant) {
    case ScalingVariant::deterministic:
      return budget / 12.0 * std::pow(lip / ell, inv_p) * std::pow(eps, -(1.0 + p) * inv_p);
    case ScalingVariant::randomized:
      return budget / 48.0 * std::pow(lip / ell, inv_p) * std::pow(eps, -(1.0 + p) * inv_p);
    case ScalingVariant::distance:
      return std::pow(budget / sigma, p + 1) / 13.0;
  }
  return 0.0;
}

}  // namespace

ScalingParams scaling_for(ScalingVariant variant, int p, double budget, double lip, double eps,
                          std::optional<double> ell_opt) {
  const double ell = ell_opt ? *ell_opt : (p >= 1 ? construction_constant(variant, p) : 0.0);
  check_scaling_inputs(p, budget, lip, eps, ell);

  ScalingParams out;
  out.variant = variant;
  out.p = p;
  out.budget = budget;
  out.lip = lip;
  out.eps = eps;
  out.ell = ell;
  const double factor = variant == ScalingVariant::deterministic ? 1.0 : 2.0;
  out.sigma = std::pow(factor * ell * eps / lip, 1.0 / p);
  if (variant == ScalingVariant::distance && out.sigma > budget) {
    throw VacuousBound("sigma = " + format_real(out.sigma) + " exceeds D = " +
                       format_real(budget) + "; the bound is vacuous");
  }
  const double raw = raw_horizon(variant, p, budget, lip, eps, ell, out.sigma);
  if (!(raw >= 1.0)) {
    throw DegenerateBudget("horizon T = floor(" + format_real(raw) + ") < 1");
  }
  if (raw > 1e15) throw PreconditionError("horizon T too large to represent");
  out.T = static_cast<std::int64_t>(std::floor(raw));
  out.multiplier = lip * std::pow(out.sigma, p + 1) / ell;
  const double T = static_cast<double>(out.T);
  if (variant == ScalingVariant::deterministic) {
    out.theorem_dim = 2.0 * T + 1.0;
  } else {
    out.theorem_dim = std::ceil(52.0 * 230.0 * 230.0 * T * T * std::log(4.0 * T * T));
  }
  return out;
}

double eps_for_horizon(ScalingVariant variant, int p, double budget, double lip,
                       std::int64_t target, std::optional<double> ell_opt) {
  if (target < 1) throw PreconditionError("target horizon must be >= 1");
  const double ell = ell_opt ? *ell_opt : construction_constant(variant, p);
  check_scaling_inputs(p, budget, lip, 1.0, ell);
  const double goal = static_cast<double>(target) + 0.5;
  const double inv_p = 1.0 / p;
  if (variant == ScalingVariant::distance) {
    // D^(p+1) / (13 sigma^(p+1)) = goal, sigma^p = 2 ell eps / lip.
    const double sigma = budget / std::pow(13.0 * goal, 1.0 / (p + 1));
    return std::pow(sigma, p) * lip / (2.0 * ell);
  }
  const double denom = variant == ScalingVariant::deterministic ? 12.0 : 48.0;
  // budget/denom * (lip/ell)^(1/p) * eps^(-(1+p)/p) = goal
  const double base = budget / denom * std::pow(lip / ell, inv_p) / goal;
  return std::pow(base, static_cast<double>(p) / (1.0 + p));
}

PlainInstance make_plain_instance(const ScalingParams& params) {
  if (params.T > 1000000) throw PreconditionError("horizon too large for a dense instance");
  return PlainInstance(static_cast<int>(params.T), params.sigma, params.multiplier, params.p);
}

RotatedInstance make_rotated_instance(const ScalingParams& params, Matrix U, std::uint64_t seed) {
  if (U.cols() != params.T) throw DimensionMismatch("U must have T columns");
  return RotatedInstance(std::move(U), 0.0, params.sigma, params.multiplier, params.p, seed);
}

DistanceInstance make_distance_instance(const ScalingParams& params, Matrix U, std::uint64_t seed) {
  if (params.variant != ScalingVariant::distance) {
    throw UnsupportedVariant("distance instance needs distance scaling");
  }
  return DistanceInstance(make_rotated_instance(params, std::move(U), seed), params.budget);
}

}  // namespace nclb
