#pragma once

// Hard instances for finding stationary points.
//
// Coordinates are 0-based throughout the C++ API. The chain is written as a
// sum of T links; link i couples a = x[i-1] (with x[-1] == 1) and b = x[i]:
//
//   fbar_T(x) = sum_i  psi(-a) phi(-b) - psi(a) phi(b).
//
// Link 0 reduces to -phi(x[0]) because psi(-1) = 0 and psi(1) = 1.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace nclb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;
using MatrixRef = Eigen::Ref<const Eigen::MatrixXd>;

/// Symmetric tridiagonal matrix: diag has n entries, off has n-1.
struct SymTridiagonal {
  Vector diag;
  Vector off;

  Eigen::Index size() const { return diag.size(); }
  Matrix dense() const;
  Vector operator*(const Vector& v) const;
};

// ---------------------------------------------------------------------------
// Unscaled chain function on R^T.

double fbar_value(int T, VectorRef x);
Vector fbar_grad(int T, VectorRef x);
SymTridiagonal fbar_hess(int T, VectorRef x);

/// Smallest j with |x[j]| < 1; at that j, |d fbar / d x_j| > 1.
std::optional<int> large_gradient_witness(int T, VectorRef x);

/// Indices whose partial derivatives (of any order) can be non-zero at x,
/// decided by the dead-zone rule: i is active iff |x[i-1]| > 1/2 (x[-1] = 1)
/// or (i < T-1 and |x[i]| > 1/2). Coordinates are in units of the unscaled chain.
std::vector<int> fbar_active_coordinates(int T, VectorRef x);

// ---------------------------------------------------------------------------
// Soft projection rho(x) = x / sqrt(1 + |x|^2 / R^2) and its Jacobian
//   d rho / dx = (I - rho rho^T / R^2) / sqrt(1 + |x|^2 / R^2),
// kept as a scalar plus a rank-one correction and applied lazily.

struct SoftProjection {
  Vector rho;
  double inv_scale = 1.0;  // 1 / sqrt(1 + |x|^2/R^2)
  double radius = 1.0;

  Vector apply_jacobian(VectorRef v) const;  // symmetric, so also J^T v
  Matrix jacobian() const;
};

SoftProjection soft_project(VectorRef x, double radius);

/// Default projection radius 230 sqrt(T).
double default_radius(int T);

// ---------------------------------------------------------------------------
// Bump hbar_T(y) = psi(1 - 12.5 |y - 0.8 e_T|^2), peak 1 at 0.8 e_T.

double bump_value(int T, VectorRef y);
Vector bump_grad(int T, VectorRef y);

// ---------------------------------------------------------------------------
// Instances. All are immutable after construction and evaluation is pure.

/// x -> multiplier * fbar_T(x / sigma) on R^T.
struct PlainInstance {
  int T = 1;
  double sigma = 1.0;
  double multiplier = 1.0;
  int p = 1;

  PlainInstance() = default;
  explicit PlainInstance(int T, double sigma = 1.0, double multiplier = 1.0, int p = 1);

  int dim() const { return T; }
  double value(VectorRef x) const;
  Vector grad(VectorRef x) const;
  SymTridiagonal hess(VectorRef x) const;
};

/// x -> multiplier * ( fbar_T(U^T rho(x / sigma)) + |x / sigma|^2 / 10 ) on R^d.
struct RotatedInstance {
  Matrix U;  // d x T, orthonormal columns
  double radius = 1.0;
  double sigma = 1.0;
  double multiplier = 1.0;
  int p = 1;
  std::uint64_t seed = 0;  // seed U was drawn with; 0 when U was supplied

  RotatedInstance() = default;
  /// radius <= 0 selects default_radius(T). Validates U^T U = I to 1e-10.
  RotatedInstance(Matrix U, double radius = 0.0, double sigma = 1.0, double multiplier = 1.0,
                  int p = 1, std::uint64_t seed = 0);

  int T() const { return static_cast<int>(U.cols()); }
  int dim() const { return static_cast<int>(U.rows()); }
  double value(VectorRef x) const;
  Vector grad(VectorRef x) const;
};

/// multiplier * fhat(x / sigma) - bump_scale * hbar_T(U^T x / D), where
/// bump_scale = multiplier * (D / sigma)^(p+1).
struct DistanceInstance {
  RotatedInstance body;
  double D = 1.0;
  double bump_scale = 0.0;

  DistanceInstance() = default;
  /// Throws PreconditionError unless 0 < sigma <= D.
  DistanceInstance(RotatedInstance body, double D);

  int T() const { return body.T(); }
  int dim() const { return body.dim(); }
  int p() const { return body.p; }
  double sigma() const { return body.sigma; }
  double value(VectorRef x) const;
  Vector grad(VectorRef x) const;
};

/// Tagged union over the three constructions.
class Instance {
 public:
  using Storage = std::variant<PlainInstance, RotatedInstance, DistanceInstance>;

  Instance(PlainInstance inst) : storage_(std::move(inst)) {}
  Instance(RotatedInstance inst) : storage_(std::move(inst)) {}
  Instance(DistanceInstance inst) : storage_(std::move(inst)) {}

  const Storage& storage() const { return storage_; }
  const PlainInstance* plain() const { return std::get_if<PlainInstance>(&storage_); }
  const RotatedInstance* rotated() const { return std::get_if<RotatedInstance>(&storage_); }
  const DistanceInstance* distance() const { return std::get_if<DistanceInstance>(&storage_); }

  std::string variant_name() const;
  int dim() const;
  int chain_length() const;
  /// Natural length scale (sigma) of the construction.
  double scale() const;

  double value(VectorRef x) const;
  Vector grad(VectorRef x) const;
  /// Analytic for the plain chain; central differences of the analytic
  /// gradient (step 1e-5 * sigma, symmetrized) for the other variants.
  Matrix hessian(VectorRef x) const;
  /// 2 when hessian() is analytic, 1 otherwise.
  int analytic_order() const;

 private:
  Storage storage_;
};

// ---------------------------------------------------------------------------
// Scaling calculators.

enum class ScalingVariant { deterministic, randomized, distance };

std::string to_string(ScalingVariant v);
ScalingVariant parse_scaling_variant(const std::string& name);

/// Lipschitz constant of the p-th derivative of fbar_T from its smoothness
/// proof: exp(2.5 p log p + 5 p + 10).
double chain_lipschitz_constant(int p);
/// Stand-in for the rotated and distance constructions' constants, whose
/// exact values are not available: chain_lipschitz_constant(p) * e^(5p).
double rotated_lipschitz_constant(int p);
/// The construction constant used by a variant (ell_p, ell_hat_p or ell'_p).
double construction_constant(ScalingVariant v, int p);

struct ScalingParams {
  ScalingVariant variant = ScalingVariant::deterministic;
  int p = 1;
  double budget = 0.0;  // Delta (function gap) or D (distance)
  double lip = 0.0;     // L_p
  double eps = 0.0;
  double ell = 0.0;     // construction constant used
  double sigma = 0.0;
  std::int64_t T = 0;
  double multiplier = 0.0;  // lip * sigma^(p+1) / ell
  /// Dimension the theorem needs: 2T+1 (deterministic) or
  /// ceil(52 * 230^2 * T^2 * log(4 T^2)) (randomized, distance).
  double theorem_dim = 0.0;

  /// Scaled gradient floor lip * sigma^p / ell (equals eps for the
  /// deterministic variant, 2 eps for the others).
  double gradient_scale() const;
};

/// Throws PreconditionError on non-positive inputs or p outside
/// [1, kDefaultMaxOrder - 1], DegenerateBudget when T < 1 and VacuousBound
/// for the distance variant when sigma > D.
ScalingParams scaling_for(ScalingVariant variant, int p, double budget, double lip, double eps,
                          std::optional<double> ell = std::nullopt);

/// The eps whose scaling lands T at target + 1/2 inside the floor.
double eps_for_horizon(ScalingVariant variant, int p, double budget, double lip,
                       std::int64_t target, std::optional<double> ell = std::nullopt);

/// Instances built from scaling parameters.
PlainInstance make_plain_instance(const ScalingParams& params);
RotatedInstance make_rotated_instance(const ScalingParams& params, Matrix U, std::uint64_t seed);
DistanceInstance make_distance_instance(const ScalingParams& params, Matrix U, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Text serialization: one header line of key=value pairs
//   variant=<plain|rotated|distance> p T d sigma multiplier R D seed
// followed by d rows of U (T values each) for rotated/distance instances.
// Reals are written with 17 significant digits.

void write_instance(std::ostream& out, const Instance& inst);
Instance read_instance(std::istream& in);
void save_instance(const std::string& path, const Instance& inst);
Instance load_instance(const std::string& path);

/// printf("%.17g") formatting shared by all writers.
std::string format_real(double v);

}  // namespace nclb
