// nclb: command-line front end.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage or input error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nclb/adversary.hpp"
#include "nclb/config.hpp"
#include "nclb/errors.hpp"
#include "nclb/experiments.hpp"
#include "nclb/instances.hpp"
#include "nclb/optimizers.hpp"
#include "nclb/oracle.hpp"
#include "nclb/random.hpp"

namespace {

using namespace nclb;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct InstanceFlags {
  std::string file;
  std::string variant = "plain";
  int T = 0;
  int d = 0;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* cmd) {
    cmd->add_option("--instance-file", file, "Instance written by instance-info --save");
    cmd->add_option("--variant", variant, "Inline instance: plain or rotated")
        ->check(CLI::IsMember({"plain", "rotated"}));
    cmd->add_option("--T", T, "Chain length of the inline instance");
    cmd->add_option("--d", d, "Ambient dimension of an inline rotated instance");
  }

  Instance build() const {
    if (!file.empty()) return load_instance(file);
    if (T < 1) throw PreconditionError("give --instance-file or --T >= 1");
    if (variant == "plain") return Instance(PlainInstance(T));
    if (!seed) throw PreconditionError("a rotated instance needs an explicit --seed");
    if (d < T) throw PreconditionError("a rotated instance needs --d >= --T");
    SeededRng rng(*seed, 0);
    return Instance(RotatedInstance(sample_orthogonal(d, T, rng), 0.0, 1.0, 1.0, 1, *seed));
  }
};

// Writes to the file when a path is given, otherwise to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw PreconditionError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  bool to_stdout() const { return !file_.is_open(); }

 private:
  std::ofstream file_;
};

void print_reports_summary(std::ostream& out, const std::vector<BoundsReport>& reports) {
  for (const auto& r : reports) {
    out << (r.passed() ? "PASS " : "FAIL ") << r.experiment << (r.relaxed ? " [RELAXED]" : "") << '\n';
    for (const auto& v : r.verdicts) {
      out << "  " << (v.pass ? "pass " : "fail ") << v.name;
      if (!v.detail.empty()) out << ": " << v.detail;
      out << '\n';
    }
  }
}

int finish_reports(const std::vector<BoundsReport>& reports, const std::string& out_path) {
  Output out(out_path);
  write_reports_csv(out.stream(), reports);
  print_reports_summary(out.to_stdout() ? std::cerr : std::cout, reports);
  for (const auto& r : reports) {
    if (!r.passed()) return kExitFail;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    args = merge_config_args(std::move(args));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Hard instances and verification experiments for nonconvex lower bounds"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // instance-info
  auto* info = app.add_subcommand("instance-info", "Print the scaling parameters of a construction");
  std::string info_variant;
  int info_p = 1;
  std::optional<double> info_delta, info_dist, info_lip;
  double info_eps = 0.0;
  std::string info_save;
  int info_d = 0;
  std::optional<std::uint64_t> info_seed;
  info->add_option("--variant", info_variant, "det, rand or dist")->required();
  info->add_option("--p", info_p, "Derivative order p");
  info->add_option("--delta", info_delta, "Function gap (det, rand)");
  info->add_option("--dist", info_dist, "Distance bound D (dist)");
  info->add_option("--lipschitz", info_lip, "Lipschitz constant L_p (default: construction constant)");
  info->add_option("--eps", info_eps, "Target gradient norm")->required();
  info->add_option("--save", info_save, "Write the scaled instance to this file");
  info->add_option("--d", info_d, "Ambient dimension for --save with rand or dist");
  info->add_option("--seed", info_seed, "Seed of U for --save with rand or dist");

  // run
  auto* run = app.add_subcommand("run", "Run an optimizer and write its trace CSV");
  InstanceFlags run_inst;
  run_inst.add(run);
  std::string run_opt;
  std::optional<double> run_L, run_noise;
  std::optional<std::size_t> run_iters;
  double run_eps = 1.0;
  std::optional<std::uint64_t> run_seed;
  std::string run_out;
  bool run_x = false, run_stop = false;
  run->add_option("--optimizer", run_opt, "gd, cubic_newton or perturbed_gd")->required();
  run->add_option("--L", run_L, "Regularization constant (default 1 for gd, 10 for cubic)");
  run->add_option("--max-iters", run_iters, "Query budget (default 100 T)");
  run->add_option("--eps", run_eps, "Threshold for the printed t_eps");
  run->add_flag("--stop-at-eps", run_stop, "Stop once the gradient norm is <= eps");
  run->add_option("--noise", run_noise, "perturbed_gd noise scale (default 1/sqrt(d))");
  run->add_option("--seed", run_seed, "Seed (required for perturbed_gd and rotated instances)");
  run->add_option("--out", run_out, "Trace CSV path (default stdout)");
  run->add_flag("--include-x", run_x, "Add the query points to the CSV");

  // verify
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suite;
  SuiteOptions sopts;
  std::string verify_out;
  verify->add_option("--suite", suite, "kernels, instances, adversary, randomized, distance or all")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify->add_flag("--fast", sopts.fast, "Reduced sample counts");
  verify->add_option("--jobs", sopts.jobs, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--seed", sopts.seed, "Base seed recorded in every report (default 1)");
  verify->add_option("--T", sopts.T, "Randomized suite: chain length");
  verify->add_option("--d", sopts.d, "Randomized suite: dimension");
  verify->add_option("--seeds", sopts.seeds, "Randomized suite: number of seeds");
  verify->add_option("--out", verify_out, "Report CSV path (default stdout)");

  // adversary
  auto* adv = app.add_subcommand("adversary", "Play a deterministic algorithm against the resisting oracle");
  AdversaryConfig acfg;
  std::string adv_out;
  adv->add_option("--algorithm", acfg.algorithm, "gd_dense, gd_origin or constant")
      ->check(CLI::IsMember({"gd_dense", "gd_origin", "constant"}));
  adv->add_option("--T", acfg.T, "Base chain length");
  adv->add_option("--T0", acfg.T0, "Query horizon");
  adv->add_option("--L", acfg.L, "Gradient descent constant");
  adv->add_option("--eps", acfg.eps, "Target gradient norm");
  adv->add_option("--order", acfg.order, "Oracle order (1 or 2)");
  adv->add_option("--out", adv_out, "Report CSV path (default stdout)");

  // audit
  auto* audit = app.add_subcommand("audit", "Finite-difference audit of an instance's derivatives");
  InstanceFlags audit_inst;
  audit_inst.add(audit);
  AuditConfig audit_cfg;
  std::optional<std::uint64_t> audit_seed;
  std::string audit_out;
  audit->add_option("--points", audit_cfg.n_points, "Number of sample points");
  audit->add_option("--orders", audit_cfg.orders, "Derivative orders to audit")->delimiter(',');
  audit->add_option("--seed", audit_seed, "Sampling seed (required)")->required();
  audit->add_option("--out", audit_out, "Report CSV path (default stdout)");

  try {
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*info) {
      const ScalingVariant v = parse_scaling_variant(info_variant);
      const bool dist = v == ScalingVariant::distance;
      const std::optional<double>& budget = dist ? info_dist : info_delta;
      if (!budget) throw PreconditionError(dist ? "dist needs --dist" : "this variant needs --delta");
      const double lip = info_lip ? *info_lip : construction_constant(v, info_p);
      const ScalingParams sp = scaling_for(v, info_p, *budget, lip, info_eps);
      std::cout << "variant: " << to_string(v) << '\n'
                << "p: " << sp.p << '\n'
                << (dist ? "D: " : "delta: ") << format_real(sp.budget) << '\n'
                << "lipschitz: " << format_real(sp.lip) << '\n'
                << "eps: " << format_real(sp.eps) << '\n'
                << "ell: " << format_real(sp.ell) << '\n'
                << "sigma: " << format_real(sp.sigma) << '\n'
                << "T: " << sp.T << '\n'
                << "multiplier: " << format_real(sp.multiplier) << '\n'
                << "gradient_scale: " << format_real(sp.gradient_scale()) << '\n'
                << "d: " << format_real(sp.theorem_dim) << '\n';
      if (v != ScalingVariant::deterministic) {
        const double relaxed = 800.0 * static_cast<double>(sp.T);
        std::cout << "suggested_relaxed_d: " << format_real(relaxed) << '\n'
                  << "note: RELAXED runs use d below the theorem-scale d above; "
                     "their results are empirical, not the theorem\n";
      }
      if (!info_save.empty()) {
        Instance inst = Instance(make_plain_instance(sp));
        if (v != ScalingVariant::deterministic) {
          if (!info_seed) throw PreconditionError("--save with rand or dist needs an explicit --seed");
          if (info_d < 2 * sp.T) throw PreconditionError("--save with rand or dist needs --d >= 2T");
          SeededRng rng(*info_seed, 0);
          Matrix U = sample_orthogonal(info_d, static_cast<int>(sp.T), rng);
          if (dist) {
            inst = Instance(make_distance_instance(sp, std::move(U), *info_seed));
          } else {
            inst = Instance(make_rotated_instance(sp, std::move(U), *info_seed));
          }
        }
        save_instance(info_save, inst);
      }
      return kExitPass;
    }

    if (*run) {
      const OptimizerKind kind = parse_optimizer_kind(run_opt);
      run_inst.seed = run_seed;
      if (kind == OptimizerKind::perturbed_gd && !run_seed) {
        throw PreconditionError("perturbed_gd needs an explicit --seed");
      }
      const Instance inst = run_inst.build();
      OptimizerConfig oc;
      oc.kind = kind;
      oc.L = run_L ? *run_L : (kind == OptimizerKind::cubic_newton ? kDefaultCubicL : kDefaultGdL);
      oc.max_iters = run_iters ? *run_iters : 100 * static_cast<std::size_t>(inst.chain_length());
      oc.eps = run_stop ? run_eps : 0.0;
      oc.seed = run_seed.value_or(0);
      if (kind == OptimizerKind::perturbed_gd) {
        oc.noise_scale = run_noise ? *run_noise : 1.0 / std::sqrt(static_cast<double>(inst.dim()));
      }
      const Trace trace = run_optimizer(oc, inst, Vector::Zero(inst.dim()));
      Output out(run_out);
      write_trace_csv(out.stream(), trace, run_x);
      std::ostream& msg = out.to_stdout() ? std::cerr : std::cout;
      const auto te = t_eps(trace, run_eps);
      if (te) {
        msg << "t_eps: " << *te << '\n';
      } else {
        msg << "t_eps: none (> " << trace.size() << " queries)\n";
      }
      return kExitPass;
    }

    if (*verify) return finish_reports(run_suite(suite, sopts), verify_out);

    if (*adv) return finish_reports({exp_adversary(acfg)}, adv_out);

    if (*audit) {
      audit_inst.seed = audit_seed;
      audit_cfg.seed = *audit_seed;
      return finish_reports({exp_derivative_audit(audit_inst.build(), audit_cfg)}, audit_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
