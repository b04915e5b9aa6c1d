#pragma once

// Packaged verification experiments. Each returns a BoundsReport whose
// verdicts can be re-derived from its rows; runtimes are kept out of the
// CSV so that reruns with the same seeds are byte-identical.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nclb/instances.hpp"
#include "nclb/optimizers.hpp"

namespace nclb {

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct BoundsReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> params;
  bool relaxed = false;
  std::uint64_t seed = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<Verdict> verdicts;
  std::vector<std::string> notes;
  double runtime_seconds = 0.0;

  bool passed() const;
  void param(const std::string& key, const std::string& value) { params.emplace_back(key, value); }
  void param(const std::string& key, double value) { params.emplace_back(key, format_real(value)); }
  void verdict(std::string name, bool pass, std::string detail = {});
};

/// Report CSV: comment lines "# experiment=...", "# params=k=v;...",
/// "# relaxed=...", "# seed=...", "# verdict name=pass|fail detail",
/// "# note ...", then the column header and one row per run. Several
/// reports are separated by a blank line.
void write_report_csv(std::ostream& out, const BoundsReport& report);
void write_reports_csv(std::ostream& out, const std::vector<BoundsReport>& reports);
std::vector<BoundsReport> read_reports_csv(std::istream& in);

/// Runs fn(i) for i in [0, n) on `jobs` threads; each index runs exactly once.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------------------
// Kernels.

struct KernelSuiteConfig {
  int max_order = 8;
  std::size_t range_points = 100001;  // grid on [-50, 50]
  int gap_grid = 100;                 // gap_grid^2 (x, y) pairs
  std::size_t fd_points = 200;
  std::uint64_t seed = 1;
};

BoundsReport exp_kernel_suite(const KernelSuiteConfig& cfg);

/// Step used by the kernel finite-difference checks.
inline constexpr double kKernelFdStep = 1e-5;

// ---------------------------------------------------------------------------
// Deterministic constructions.

/// Default regularization constants (in units of the unscaled chain).
inline constexpr double kDefaultGdL = 1.0;
inline constexpr double kDefaultCubicL = 10.0;

struct DeterministicConfig {
  int p = 1;
  double delta = 1.0;
  double lip = 1.0;
  double eps = 1.0;
  /// When set, skip the scaling and use the unscaled chain of this length with eps = 1.
  std::optional<int> unscaled_T;
  std::vector<OptimizerKind> optimizers{OptimizerKind::gd, OptimizerKind::cubic_newton};
  double gd_L = kDefaultGdL;
  double cubic_L = kDefaultCubicL;
  std::size_t horizon_factor = 100;
};

/// Zero-respecting optimizers from 0 on the (scaled) chain: records t_eps,
/// the gradient floor over t <= T, zero-respecting and staircase checks.
BoundsReport exp_deterministic_lower_bound(const DeterministicConfig& cfg);

/// All zero-respecting two-query strategies on the T = 2 chain are
/// x1 = 0, x2 = (a, 0); checks the gradient stays above 1 on a grid of a.
BoundsReport exp_micro_case(std::size_t grid_points);

/// Cubic Newton from 0 on the unscaled chain reaches |grad| <= 1 within
/// horizon_factor * T queries.
BoundsReport exp_upper_bound(int T, double cubic_L, std::size_t horizon_factor);

/// Closed-form subproblem cases plus random instances compared against
/// random trial steps of matching norm.
BoundsReport exp_cubic_subproblem(int n_instances, int n_trials, int max_dim, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Derivative audit.

struct AuditConfig {
  std::size_t n_points = 100;
  std::vector<int> orders{1, 2};
  std::uint64_t seed = 1;
};

/// Finite-difference agreement of analytic derivatives plus the sampled
/// value floor and gradient cap of the chain.
BoundsReport exp_derivative_audit(const Instance& inst, const AuditConfig& cfg);

/// Relative finite-difference error |fd - an|_inf / max(1, |an|_inf).
double fd_error(const Vector& fd, const Vector& an);

// ---------------------------------------------------------------------------
// Randomized constructions.

struct RandomizedConfig {
  int T = 5;
  int d = 4000;
  int n_seeds = 50;
  std::uint64_t seed = 1;
  double noise_scale = -1.0;  // < 0 selects 1 / sqrt(d)
  double start_radius = 1.0;
  double L = kDefaultGdL;
  double threshold = 0.9;
  int jobs = 1;
};

/// Haar U per seed, perturbed gradient descent for T queries on the rotated
/// chain, fraction of seeds whose gradient norms all stay above 1/2.
BoundsReport exp_randomized(const RandomizedConfig& cfg);

/// Same run with U chosen so that the start point maps onto a stationary
/// point of the restricted function; the gradient floor is expected to fail.
BoundsReport exp_randomized_aligned(int T, int d, std::uint64_t seed);

/// Sphere marginal tails against 2 exp(-d alpha^2 / 2) + 3 sigma_hat, and the
/// exact circle marginal.
BoundsReport exp_sphere(const std::vector<std::pair<int, double>>& cases, std::size_t n_samples,
                        std::uint64_t seed);

/// KS comparison of <u1, e1> under U and QU for a fixed orthogonal Q.
BoundsReport exp_rotational_invariance(int d, int n_draws, std::uint64_t seed);

/// Haar moment check: variance of the first entry of a Haar column is 1/d.
BoundsReport exp_haar_moment(int d, int n_draws, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Distance-bounded construction.

struct DistanceConfig {
  int p = 1;
  double D = 1.0;
  std::optional<double> lip;  // default: the construction constant
  std::optional<double> eps;  // default: chosen so that T = target_T
  int target_T = 3;
  int d = 200;
  std::size_t n_samples = 10000;
  int n_seeds = 10;
  std::size_t audit_points = 100;
  std::uint64_t seed = 1;
  int jobs = 1;
};

BoundsReport exp_distance(const DistanceConfig& cfg);

// ---------------------------------------------------------------------------
// Adversary.

struct AdversaryConfig {
  std::string algorithm = "gd_dense";  // gd_dense, gd_origin, constant
  int T = 15;
  int T0 = 30;
  double L = kDefaultGdL;
  double eps = 1.0;
  int order = 1;
};

BoundsReport exp_adversary(const AdversaryConfig& cfg);

// ---------------------------------------------------------------------------
// Suites used by the CLI.

struct SuiteOptions {
  bool fast = false;
  int jobs = 1;
  std::uint64_t seed = 1;
  std::optional<int> T;
  std::optional<int> d;
  std::optional<int> seeds;
};

/// kernels, instances, adversary, randomized, distance or all.
std::vector<BoundsReport> run_suite(const std::string& suite, const SuiteOptions& opts);
const std::vector<std::string>& suite_names();

}  // namespace nclb
