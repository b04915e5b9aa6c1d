// Acceptance runner: one PASS/FAIL line per criterion, exit 1 on any failure.
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nclb/experiments.hpp"
#include "nclb/instances.hpp"

using namespace nclb;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const Verdict* find(const BoundsReport& r, const std::string& name) {
  for (const auto& v : r.verdicts) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

bool has(const BoundsReport& r, const std::string& name) {
  const Verdict* v = find(r, name);
  return v && v->pass;
}

std::string failing(const std::vector<BoundsReport>& reports) {
  std::string out;
  for (const auto& r : reports) {
    for (const auto& v : r.verdicts) {
      if (!v.pass) out += r.experiment + ":" + v.name + " ";
    }
  }
  return out.empty() ? "all verdicts pass" : "failing: " + out;
}

std::string csv(const std::vector<BoundsReport>& reports) {
  std::ostringstream out;
  write_reports_csv(out, reports);
  return out.str();
}

Outcome check_kernels() {
  const BoundsReport r = exp_kernel_suite(KernelSuiteConfig{});
  return {r.passed(), failing({r})};
}

Outcome check_unscaled_chain() {
  DeterministicConfig cfg;
  cfg.unscaled_T = 20;
  const BoundsReport r = exp_deterministic_lower_bound(cfg);
  bool ok = r.passed();
  for (const char* opt : {"gd", "cubic_newton"}) {
    const std::string o = opt;
    ok = ok && has(r, o + "_staircase") && has(r, o + "_gradient_floor") &&
         has(r, o + "_zero_respecting") && has(r, o + "_t_eps_exceeds_T");
  }
  return {ok, failing({r})};
}

Outcome check_scaled_chain() {
  DeterministicConfig cfg;
  cfg.p = 1;
  cfg.lip = chain_lipschitz_constant(1);
  cfg.delta = 12.0;
  cfg.eps = eps_for_horizon(ScalingVariant::deterministic, 1, cfg.delta, cfg.lip, 10);
  const ScalingParams sp = scaling_for(ScalingVariant::deterministic, 1, cfg.delta, cfg.lip, cfg.eps);
  const BoundsReport r = exp_deterministic_lower_bound(cfg);
  const bool ok = sp.T == 10 && r.passed() && has(r, "gd_t_eps_exceeds_T") &&
                  has(r, "cubic_newton_t_eps_exceeds_T");
  return {ok, "T=" + std::to_string(sp.T) + ", " + failing({r})};
}

Outcome check_upper_bound() {
  const BoundsReport r = exp_upper_bound(10, kDefaultCubicL, 100);
  return {r.passed(), failing({r})};
}

Outcome check_cubic_subproblem() {
  const BoundsReport r = exp_cubic_subproblem(100, 10000, 10, 1);
  return {r.passed(), failing({r})};
}

Outcome check_adversary() {
  AdversaryConfig cfg;
  cfg.algorithm = "gd_dense";
  const BoundsReport r = exp_adversary(cfg);
  return {r.passed(), failing({r})};
}

Outcome check_randomized() {
  RandomizedConfig cfg;
  cfg.T = 5;
  cfg.d = 4000;
  cfg.n_seeds = 50;
  cfg.seed = 1;
  const BoundsReport r = exp_randomized(cfg);
  return {r.passed() && r.relaxed, failing({r}) + (r.relaxed ? ", RELAXED flag set" : ", flag missing")};
}

Outcome check_sphere() {
  const BoundsReport r = exp_sphere({{100, 0.3}, {1000, 0.15}}, 100000, 1);
  return {r.passed(), failing({r})};
}

Outcome check_distance() {
  const BoundsReport r = exp_distance(DistanceConfig{});
  return {r.passed(), failing({r})};
}

Outcome check_reproducibility() {
  SuiteOptions o;
  o.seed = 20261016;
  const auto first = run_suite("all", o);
  std::istringstream in(csv(first));
  const auto parsed = read_reports_csv(in);
  SuiteOptions again;
  again.seed = parsed.empty() ? 0 : parsed.front().seed;
  const auto second = run_suite("all", again);
  again.jobs = 2;
  const auto threaded = run_suite("all", again);
  const bool same = csv(first) == csv(second) && csv(first) == csv(threaded);
  return {same && again.seed == o.seed,
          "stored seed " + std::to_string(again.seed) + (same ? ", CSVs identical" : ", CSVs differ")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "kernel identities", 30, check_kernels},
      {2, "unscaled chain T=20 resists gd and cubic Newton", 10, check_unscaled_chain},
      {3, "scaled chain p=1 with T=10", 10, check_scaled_chain},
      {4, "cubic Newton upper bound", 60, check_upper_bound},
      {5, "cubic subproblem solver", 60, check_cubic_subproblem},
      {6, "resisting oracle against dense gd", 30, check_adversary},
      {7, "randomized chain T=5 d=4000 (RELAXED)", 300, check_randomized},
      {8, "sphere marginal tails", 30, check_sphere},
      {9, "distance-bounded construction", 60, check_distance},
      {10, "reproducibility from the stored seed", 600, check_reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = out.pass && secs <= c.limit_s;
    failures += !pass;
    std::printf("%s criterion %d: %s (%.2fs, limit %.0fs) %s\n", pass ? "PASS" : "FAIL", c.id,
                c.name, secs, c.limit_s, out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
