#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "nclb/errors.hpp"
#include "nclb/instances.hpp"
#include "nclb/kernels.hpp"
#include "nclb/random.hpp"
#include "oracles.hpp"

using namespace nclb;

namespace {

constexpr double kPhiAtZero = 2.0663656770612465;
const double kSqrtE = std::sqrt(std::numbers::e);

double max_abs(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

double fd_rel(const Vector& fd, const Vector& an) {
  return (fd - an).cwiseAbs().maxCoeff() / std::max(1.0, max_abs(an));
}

Vector random_point(SeededRng& rng, int n, double spread) {
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = spread * (2.0 * rng.uniform() - 1.0);
  return x;
}

}  // namespace

TEST_CASE("fbar values") {
  CHECK(std::abs(fbar_value(1, Vector::Zero(1)) + kPhiAtZero) <= 1e-13);
  CHECK(std::abs(fbar_value(5, Vector::Zero(5)) + kPhiAtZero) <= 1e-13);
  SeededRng rng(3, 0);
  for (int s = 0; s < 2000; ++s) {
    const Vector x = random_point(rng, 10, 3.0);
    REQUIRE(fbar_value(10, x) > -120.0);
  }
  CHECK_THROWS_AS(fbar_value(4, Vector::Zero(3)), DimensionMismatch);
}

TEST_CASE("fbar gradient") {
  const Vector g = fbar_grad(4, Vector::Zero(4));
  CHECK(std::abs(g[0] + kSqrtE) <= 1e-15);
  CHECK(g.tail(3).isZero(0.0));
  auto f4 = [](const Vector& x) { return fbar_value(4, x); };
  CHECK(fd_rel(oracle::fd_gradient(f4, Vector::Zero(4)), g) <= 1e-6);

  SUBCASE("support of (a, 0, ..., 0)") {
    for (double a : {-3.0, -1.0, -0.5, 0.2, 0.6, 1.0, 2.5}) {
      Vector x = Vector::Zero(6);
      x[0] = a;
      const Vector ga = fbar_grad(6, x);
      CHECK(ga.tail(4).isZero(0.0));
    }
  }
  SUBCASE("finite differences at random points, T = 8") {
    SeededRng rng(5, 0);
    auto f8 = [](const Vector& x) { return fbar_value(8, x); };
    for (int s = 0; s < 50; ++s) {
      const Vector x = random_point(rng, 8, 2.0);
      CHECK(fd_rel(oracle::fd_gradient(f8, x), fbar_grad(8, x)) <= 1e-6);
    }
  }
  SUBCASE("norm cap") {
    SeededRng rng(6, 0);
    for (int s = 0; s < 2000; ++s) {
      const Vector x = random_point(rng, 12, 4.0);
      REQUIRE(fbar_grad(12, x).norm() <= 23.0 * std::sqrt(12.0));
    }
  }
}

TEST_CASE("fbar Hessian") {
  const Matrix H0 = fbar_hess(3, Vector::Zero(3)).dense();
  CHECK(H0(0, 0) == 0.0);
  auto g3 = [](const Vector& x) { return fbar_grad(3, x); };
  CHECK((oracle::fd_jacobian(g3, Vector::Zero(3)) - H0).cwiseAbs().maxCoeff() <= 1e-5);

  SeededRng rng(8, 0);
  auto g7 = [](const Vector& x) { return fbar_grad(7, x); };
  for (int s = 0; s < 30; ++s) {
    const Vector x = random_point(rng, 7, 2.0);
    const Matrix H = fbar_hess(7, x).dense();
    const Matrix J = oracle::fd_jacobian(g7, x);
    CHECK((J - H).cwiseAbs().maxCoeff() / std::max(1.0, H.cwiseAbs().maxCoeff()) <= 1e-5);
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) {
        if (std::abs(i - j) > 1) REQUIRE(H(i, j) == 0.0);
      }
    }
  }

  SUBCASE("rows past a quiet tail vanish") {
    // |x_j| < 1/2 for j >= 3 (1-based): rows and columns >= 4 are zero.
    Vector x(6);
    x << 1.4, -0.9, 0.3, -0.2, 0.45, 0.1;
    const Matrix H = fbar_hess(6, x).dense();
    CHECK(H.bottomRows(3).isZero(0.0));
    CHECK(H.rightCols(3).isZero(0.0));
  }
}

TEST_CASE("zero-chain and robust zero-chain") {
  SeededRng rng(12, 0);
  const int T = 8;
  for (int i = 1; i <= T; ++i) {
    for (int s = 0; s < 50; ++s) {
      Vector x = Vector::Zero(T);
      x.head(i - 1) = random_point(rng, i - 1, 3.0);
      const Vector g = fbar_grad(T, x);
      const Matrix H = fbar_hess(T, x).dense();
      REQUIRE(g.tail(T - i).isZero(0.0));
      REQUIRE(H.bottomRows(T - i).isZero(0.0));
      REQUIRE(H.rightCols(T - i).isZero(0.0));
    }
  }
  for (int s = 0; s < 500; ++s) {
    Vector x = random_point(rng, T, 2.0);
    const int j = 1 + static_cast<int>(rng.uniform() * (T - 1)) % (T - 1);  // 0-based, j >= 1
    x[j - 1] = 0.49 * (2.0 * rng.uniform() - 1.0);
    x[j] = 0.39 * (2.0 * rng.uniform() - 1.0);
    const double room = 0.4 - std::abs(x[j]);
    Vector y = x;
    y[j] += room * (2.0 * rng.uniform() - 1.0);
    REQUIRE(fbar_value(T, x) == fbar_value(T, y));
  }
}

TEST_CASE("large gradient witness") {
  CHECK(large_gradient_witness(5, Vector::Zero(5)) == 0);
  CHECK(std::abs(fbar_grad(5, Vector::Zero(5))[0]) > 1.0);
  CHECK_FALSE(large_gradient_witness(4, Vector::Ones(4)).has_value());
  CHECK(large_gradient_witness(3, Vector{{1.0, 0.5, 1.0}}) == 1);

  SeededRng rng(21, 0);
  for (int s = 0; s < 10000; ++s) {
    const int T = 2 + s % 9;
    Vector x = random_point(rng, T, 3.0);
    const int k = static_cast<int>(rng.uniform() * T) % T;
    x[k] = 2.0 * rng.uniform() - 1.0;
    x[k] = std::min(std::max(x[k], -0.999), 0.999);
    const auto j = large_gradient_witness(T, x);
    REQUIRE(j.has_value());
    const Vector g = fbar_grad(T, x);
    REQUIRE(std::abs(g[*j]) > 1.0);
    REQUIRE(g.norm() > 1.0);
  }
}

TEST_CASE("directional derivative Lipschitz spot check") {
  SeededRng rng(31, 0);
  const int T = 6;
  for (int p = 1; p <= 2; ++p) {
    const double ell = chain_lipschitz_constant(p);
    CHECK(std::abs(ell - std::exp(2.5 * p * std::log(p) + 5.0 * p + 10.0)) <= 1e-9 * ell);
    for (int s = 0; s < 200; ++s) {
      const Vector x = random_point(rng, T, 2.0);
      Vector v = rng.normal_vector(T);
      v /= v.norm();
      const double t = rng.uniform(), u = rng.uniform();
      auto dir = [&](double r) {
        const Vector y = x + r * v;
        return p == 1 ? fbar_grad(T, y).dot(v) : v.dot(fbar_hess(T, y) * v);
      };
      REQUIRE(std::abs(dir(t) - dir(u)) <= ell * std::abs(t - u));
    }
  }
}

TEST_CASE("soft projection") {
  const double R = 7.0;
  const SoftProjection z = soft_project(Vector::Zero(4), R);
  CHECK(z.rho.isZero(0.0));
  CHECK(z.jacobian().isApprox(Matrix::Identity(4, 4)));

  Vector x = Vector::Ones(4);
  x *= R / x.norm();
  CHECK(std::abs(soft_project(x, R).rho.norm() - R / std::sqrt(2.0)) <= 1e-12);
  CHECK(std::abs(soft_project(1e6 * x, R).rho.norm() - R) <= 1e-6 * R);
  CHECK(soft_project(1e6 * x, R).rho.norm() < R);

  SeededRng rng(4, 0);
  const Vector y = 5.0 * rng.normal_vector(4);
  auto rho = [&](const Vector& w) { return Vector(soft_project(w, R).rho); };
  const SoftProjection sp = soft_project(y, R);
  CHECK((oracle::fd_jacobian(rho, y) - sp.jacobian()).cwiseAbs().maxCoeff() <= 1e-8);
  const Vector v = rng.normal_vector(4);
  CHECK((sp.apply_jacobian(v) - sp.jacobian() * v).norm() <= 1e-13);
  CHECK(default_radius(9) == 690.0);
}

TEST_CASE("rotated instance") {
  const int T = 5, d = 50;
  SeededRng rng(17, 0);
  const RotatedInstance inst(sample_orthogonal(d, T, rng));
  CHECK(inst.radius == default_radius(T));
  CHECK(std::abs(inst.value(Vector::Zero(d)) + kPhiAtZero) <= 1e-13);
  CHECK((inst.grad(Vector::Zero(d)) + kSqrtE * inst.U.col(0)).norm() <= 1e-14);

  SUBCASE("identity columns select coordinates") {
    Matrix I = Matrix::Zero(8, 3);
    I.topRows(3).setIdentity();
    const RotatedInstance id(I);
    Vector x = Vector::Zero(8);
    x.head(3) << 0.7, -1.2, 2.0;
    const Vector r = soft_project(x, id.radius).rho;
    CHECK(std::abs(id.value(x) - (fbar_value(3, r.head(3)) + x.squaredNorm() / 10.0)) <= 1e-13);
  }
  SUBCASE("orthogonal invariance") {
    const Matrix Q = sample_orthogonal(d, d, rng);
    const RotatedInstance turned(Q * inst.U);
    for (int s = 0; s < 20; ++s) {
      const Vector x = 3.0 * rng.normal_vector(d);
      CHECK(std::abs(inst.value(x) - turned.value(Q * x)) <= 1e-9);
    }
  }
  SUBCASE("finite differences") {
    auto f = [&](const Vector& x) { return inst.value(x); };
    for (int s = 0; s < 20; ++s) {
      const Vector x = 2.0 * rng.normal_vector(d);
      CHECK(fd_rel(oracle::fd_gradient(f, x), inst.grad(x)) <= 1e-6);
    }
  }
  SUBCASE("far points have large gradients") {
    for (int s = 0; s < 200; ++s) {
      Vector x = rng.normal_vector(d);
      x *= inst.radius * (0.5 + 3.0 * rng.uniform()) / x.norm();
      REQUIRE(inst.grad(x).norm() > std::sqrt(static_cast<double>(T)));
    }
  }
  SUBCASE("value gap") {
    const double f0 = inst.value(Vector::Zero(d));
    for (int s = 0; s < 2000; ++s) {
      const Vector x = (s % 2 ? 1.0 : 20.0) * rng.normal_vector(d);
      REQUIRE(f0 - inst.value(x) <= 12.0 * T);
    }
  }
  CHECK_THROWS_AS(RotatedInstance(Matrix::Ones(6, 2)), PreconditionError);
  CHECK_THROWS_AS(inst.value(Vector::Zero(d + 1)), DimensionMismatch);
}

TEST_CASE("bump") {
  const int T = 4;
  const Vector peak = 0.8 * Vector::Unit(T, T - 1);
  CHECK(bump_value(T, peak) == 1.0);
  SeededRng rng(19, 0);
  for (int s = 0; s < 500; ++s) {
    Vector x = rng.normal_vector(T);
    x *= (1.0 + 2.0 * rng.uniform()) / x.norm();
    REQUIRE(bump_value(T, x) == 0.0);
    Vector y = 0.5 * rng.normal_vector(T);
    y[T - 1] = 0.6 - rng.uniform();
    REQUIRE(bump_value(T, y) == 0.0);
    REQUIRE(bump_grad(T, y).isZero(0.0));
  }
  auto f = [&](const Vector& x) { return bump_value(T, x); };
  for (int s = 0; s < 50; ++s) {
    const Vector x = peak + 0.08 * rng.normal_vector(T);
    const double v = bump_value(T, x);
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
    CHECK(fd_rel(oracle::fd_gradient(f, x), bump_grad(T, x)) <= 1e-6);
  }
}

TEST_CASE("scaling") {
  const double ell1 = chain_lipschitz_constant(1);
  const ScalingParams sp = scaling_for(ScalingVariant::deterministic, 1, 24.0, ell1, 1.0);
  CHECK(sp.sigma == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sp.T == 2);
  CHECK(sp.multiplier == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sp.theorem_dim == 5.0);
  CHECK(sp.gradient_scale() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(scaling_for(ScalingVariant::deterministic, 1, 1e-9, ell1, 1.0), DegenerateBudget);
  CHECK_THROWS_AS(scaling_for(ScalingVariant::deterministic, 1, 24.0, ell1, 0.0), PreconditionError);
  CHECK_THROWS_AS(scaling_for(ScalingVariant::deterministic, 0, 24.0, ell1, 1.0), PreconditionError);

  SUBCASE("randomized uses 48 and a doubled sigma") {
    const double ellh = rotated_lipschitz_constant(1);
    CHECK(ellh == doctest::Approx(ell1 * std::exp(5.0)).epsilon(1e-14));
    const ScalingParams r = scaling_for(ScalingVariant::randomized, 1, 4810.0, ellh, 0.5);
    CHECK(r.sigma == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.T == 400);  // 4810 / 48 * 0.5^-2 = 400.83
    CHECK(r.gradient_scale() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("distance") {
    const double ellp = construction_constant(ScalingVariant::distance, 1);
    const double eps = 0.01, D = 2.0;
    const ScalingParams s = scaling_for(ScalingVariant::distance, 1, D, ellp, eps);
    const double sigma = 2.0 * eps;
    CHECK(s.sigma == doctest::Approx(sigma).epsilon(1e-14));
    CHECK(s.T == static_cast<std::int64_t>(std::floor(D * D / (13.0 * sigma * sigma))));
    CHECK_THROWS_AS(scaling_for(ScalingVariant::distance, 1, D, ellp, 5.0), VacuousBound);
  }
  SUBCASE("eps for a target horizon") {
    for (int target : {2, 10, 37}) {
      const double e = eps_for_horizon(ScalingVariant::deterministic, 1, 12.0, ell1, target);
      CHECK(scaling_for(ScalingVariant::deterministic, 1, 12.0, ell1, e).T == target);
      const double e2 = eps_for_horizon(ScalingVariant::distance, 2, 1.0,
                                        construction_constant(ScalingVariant::distance, 2), target);
      CHECK(scaling_for(ScalingVariant::distance, 2, 1.0,
                        construction_constant(ScalingVariant::distance, 2), e2)
                .T == target);
    }
  }
  CHECK(parse_scaling_variant("det") == ScalingVariant::deterministic);
  CHECK(parse_scaling_variant("rand") == ScalingVariant::randomized);
  CHECK(parse_scaling_variant("dist") == ScalingVariant::distance);
  CHECK_THROWS_AS(parse_scaling_variant("other"), UnsupportedVariant);
}

TEST_CASE("scaled plain instance") {
  const double ell1 = chain_lipschitz_constant(1);
  const ScalingParams sp = scaling_for(ScalingVariant::deterministic, 1, 12.0, ell1, 0.3);
  const PlainInstance inst = make_plain_instance(sp);
  CHECK(inst.T == sp.T);
  CHECK(sp.multiplier == doctest::Approx(sp.lip * sp.sigma * sp.sigma / ell1).epsilon(1e-14));
  CHECK(sp.gradient_scale() == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(Instance(inst).grad(Vector::Zero(inst.T)).norm() ==
        doctest::Approx(kSqrtE * sp.multiplier / sp.sigma).epsilon(1e-14));
}

TEST_CASE("distance instance") {
  const double ellp = construction_constant(ScalingVariant::distance, 1);
  const double eps = eps_for_horizon(ScalingVariant::distance, 1, 1.0, ellp, 3);
  const ScalingParams sp = scaling_for(ScalingVariant::distance, 1, 1.0, ellp, eps);
  REQUIRE(sp.T == 3);
  SeededRng rng(23, 0);
  const int d = 40;
  const DistanceInstance inst = make_distance_instance(sp, sample_orthogonal(d, 3, rng), 23);
  const double m = sp.multiplier;
  const double depth = sp.lip * std::pow(1.0, 2) / ellp;
  CHECK(inst.bump_scale == doctest::Approx(depth).epsilon(1e-14));
  const Vector peak = 0.8 * inst.body.U.col(2);
  CHECK(inst.value(peak) < -117.0 / 125.0 * depth);
  CHECK(inst.value(peak) <= -117.0 / 125.0 * depth + m * fbar_value(3, Vector::Zero(3)) + 1e-12);

  auto f = [&](const Vector& x) { return inst.value(x); };
  int checked = 0;
  for (int s = 0; s < 100; ++s) {
    const Vector x = (s % 2 ? peak : Vector::Zero(d)) + 0.3 * rng.normal_vector(d);
    const Vector g = inst.grad(x);
    const Vector fd = oracle::fd_gradient(f, x, 1e-5 * sp.sigma);
    CHECK(fd_rel(fd, g) <= 1e-6);
    if (bump_value(3, inst.body.U.transpose() * x) == 0.0) {
      ++checked;
      CHECK(inst.value(x) >= -12.0 * 3 * m + m * fbar_value(3, Vector::Zero(3)));
    }
  }
  CHECK(checked > 0);
  RotatedInstance wide = inst.body;
  CHECK_THROWS_AS(DistanceInstance(wide, 0.5 * wide.sigma), PreconditionError);
}

TEST_CASE("instance serialization round trip") {
  SeededRng rng(29, 0);
  const Instance plain{PlainInstance(6, 0.25, 3.5, 1)};
  const Instance rot{RotatedInstance(sample_orthogonal(12, 4, rng), 0.0, 0.5, 2.0, 1, 29)};
  const ScalingParams sp = scaling_for(ScalingVariant::distance, 1, 1.0,
                                       construction_constant(ScalingVariant::distance, 1), 0.05);
  const Instance dist(make_distance_instance(sp, sample_orthogonal(2 * static_cast<int>(sp.T) + 3,
                                                                   static_cast<int>(sp.T), rng),
                                             29));
  for (const Instance* inst : {&plain, &rot, &dist}) {
    std::stringstream buf;
    write_instance(buf, *inst);
    const Instance back = read_instance(buf);
    CHECK(back.variant_name() == inst->variant_name());
    REQUIRE(back.dim() == inst->dim());
    for (int s = 0; s < 10; ++s) {
      const Vector x = inst->scale() * rng.normal_vector(inst->dim());
      CHECK(back.value(x) == inst->value(x));
      CHECK(back.grad(x) == inst->grad(x));
    }
  }
  std::stringstream bad("variant=plain p=1 T=x\n");
  CHECK_THROWS_AS(read_instance(bad), ParseError);
  std::stringstream empty("");
  CHECK_THROWS_AS(read_instance(empty), ParseError);
}
