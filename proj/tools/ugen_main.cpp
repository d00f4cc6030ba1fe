// Command line front end: generate benchmark systems, solve them by
// u-generation / regeneration / a direct total-degree homotopy, run the
// side-by-side dropped-equation comparison, and re-check solution files.

#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ugen/experiment.hpp"
#include "ugen/io.hpp"
#include "ugen/multiproj.hpp"
#include "ugen/systems.hpp"

namespace {

using namespace ugen;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct TrackerFlags {
  double min_step = -1.0;
  int max_corr_steps = -1;
  double infinity_threshold = -1.0;
  double epsilon = 1e-5;
  double eliminate_after = -1.0;
  std::uint64_t seed = 2024;
  int threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--min-step", min_step, "Minimum tracker step size");
    cmd->add_option("--max-corr-steps", max_corr_steps,
                    "Newton corrector iterations per step");
    cmd->add_option("--infinity-threshold", infinity_threshold,
                    "Magnitude below which a homogeneous coordinate counts as zero");
    cmd->add_option("--epsilon", epsilon,
                    "Start parameter t for multiprojective runs");
    cmd->add_option("--eliminate-after", eliminate_after,
                    "Eliminate cone variables once t exceeds this value");
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--threads", threads, "Worker threads (0 = hardware)");
  }

  TrackerSettings settings(bool mle_defaults) const {
    TrackerSettings s;
    if (mle_defaults) {
      s.min_step = 1e-14;
      s.max_corrector_iters = 2;
    }
    if (min_step > 0.0) s.min_step = min_step;
    if (max_corr_steps > 0) s.max_corrector_iters = max_corr_steps;
    if (infinity_threshold > 0.0) s.infinity_threshold = infinity_threshold;
    s.seed = seed;
    s.threads = threads;
    return s;
  }
};

PolySystem generate_family(const std::string& family, int n, int k, int r,
                           std::uint64_t seed) {
  if (family == "katsura") return gen_katsura(n);
  if (family == "cyclic") return gen_cyclic(n);
  if (family == "banded") return gen_banded_quadrics(n, k, seed);
  if (family == "mle") return gen_mle_symmetric(n, r, random_count_matrix(n, seed));
  throw CLI::ValidationError("--family", "unknown family: " + family);
}

bool family_is_mle(const std::string& family) { return family == "mle"; }

/// Affine coordinates for points of a homogenized system: divide by each
/// group's homogenizing coordinate and drop it.
MultiProjPoint to_affine_point(const MultiProjPoint& p, const Ring& hom_ring) {
  MultiProjPoint out;
  out.factors.resize(p.nfactors());
  for (int g = 0; g < hom_ring.ngroups(); ++g) {
    const auto& gv = hom_ring.group(g);
    const int h = hom_ring.homog_var(g);
    int hpos = -1;
    for (size_t c = 0; c < gv.size(); ++c)
      if (gv[c] == h) hpos = static_cast<int>(c);
    Eigen::VectorXcd f(gv.size() - 1);
    int j = 0;
    for (size_t c = 0; c < gv.size(); ++c)
      if (static_cast<int>(c) != hpos) f[j++] = p.factors[g][c] / p.factors[g][hpos];
    out.factors[g] = std::move(f);
  }
  return out;
}

void print_report(const BenchReport& r) {
  std::printf("%-12s %-12s  prep %6d  main %6d  ok %6d  inf %5d  fail %4d  distinct %6d  %.3fs\n",
              r.system_name.c_str(), to_string(r.method), r.paths_prep,
              r.paths_main, r.successes, r.at_infinity, r.failures,
              r.distinct_solutions, r.wall_time);
}

int cmd_gen(const std::string& family, int n, int k, int r, std::uint64_t seed,
            const std::string& out) {
  const PolySystem sys = generate_family(family, n, k, r, seed);
  write_system_json(sys, out);
  std::printf("wrote %s: %d equations, %d variables, %d group(s)\n", out.c_str(),
              sys.size(), sys.ring->nvars(), sys.ring->ngroups());
  return kExitOk;
}

int cmd_solve(const std::string& method, const std::string& system_path,
              const std::string& out, int drop_eq, const TrackerFlags& flags) {
  const PolySystem sys = read_system_json(system_path);
  const bool affine_input = !sys.is_group_homogeneous();
  const bool mle_like = sys.ring->ngroups() > 1;
  TrackerSettings settings = flags.settings(mle_like);

  ExperimentOptions opt;
  opt.system_name = system_path;
  opt.epsilon = flags.epsilon;
  std::vector<MultiProjPoint> solutions;
  opt.solutions_out = &solutions;

  BenchReport report;
  if (method == "total-degree") {
    report = run_direct_solve(sys, settings, opt);
  } else {
    const Method m = (method == "ugen") ? Method::UGen : Method::Regen;
    if (method != "ugen" && method != "regen")
      throw CLI::ValidationError("--method", "unknown method: " + method);
    const int which = (drop_eq >= 0) ? drop_eq : sys.size() - 1;
    report = run_dropped_equation_experiment(sys, which, m, settings, opt);
  }
  print_report(report);

  const PolySystem hom = sys.is_group_homogeneous() ? sys : homogenize_system(sys);
  std::vector<SolutionEntry> entries;
  for (const auto& p : solutions) {
    SolutionEntry e;
    e.status = "Success";
    e.point = affine_input ? to_affine_point(p, *hom.ring) : p;
    entries.push_back(std::move(e));
  }
  write_solutions_json(entries, out);
  std::printf("wrote %s: %zu solutions\n", out.c_str(), entries.size());
  if (report.failures > 0) return kExitNumerical;
  return kExitOk;
}

int cmd_bench(const std::string& family, int n, int k, int r,
              const TrackerFlags& flags) {
  const PolySystem sys = generate_family(family, n, k, r, flags.seed);
  TrackerSettings settings = flags.settings(family_is_mle(family));
  const std::string name = family + "-" + std::to_string(n);

  ExperimentOptions opt;
  opt.system_name = name;
  opt.epsilon = flags.epsilon;

  const int which =
      family_is_mle(family) ? mle_dropped_equation_index(n) : sys.size() - 1;
  BenchReport ug = run_dropped_equation_experiment(sys, which, Method::UGen,
                                                   settings, opt);
  BenchReport rg = run_dropped_equation_experiment(sys, which, Method::Regen,
                                                   settings, opt);

  std::printf("\n%-12s | #sols | regeneration: #paths (prep+main)  t_regen | u-generation: #paths  t_ugen | ratio\n",
              "system");
  const double ratio = ug.wall_time / (rg.wall_time + 1e-12);
  std::printf("%-12s | %5d | %10d (%d+%d)  %7.3fs | %12d  %6.3fs | %.2f\n",
              name.c_str(), rg.distinct_solutions, rg.paths_prep + rg.paths_main,
              rg.paths_prep, rg.paths_main, rg.wall_time, ug.paths_main,
              ug.wall_time, ratio);
  std::printf("(timings are machine-local wall clock; path counts are the contract)\n");
  if (ug.distinct_solutions != rg.distinct_solutions) {
    std::printf("warning: methods disagree (%d vs %d)\n", ug.distinct_solutions,
                rg.distinct_solutions);
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_verify(const std::string& system_path, const std::string& sols_path,
               double tol) {
  const PolySystem sys = read_system_json(system_path);
  const auto entries = read_solutions_json(sols_path);
  int bad = 0;
  double worst = 0.0;
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& p = entries[i].point;
    if (p.nfactors() != sys.ring->ngroups()) {
      std::printf("entry %zu: wrong factor count\n", i);
      ++bad;
      continue;
    }
    Eigen::VectorXcd x(sys.ring->nvars());
    bool dims_ok = true;
    for (int g = 0; g < sys.ring->ngroups(); ++g) {
      const auto& gv = sys.ring->group(g);
      if (p.factors[g].size() != static_cast<int>(gv.size())) dims_ok = false;
    }
    if (!dims_ok) {
      std::printf("entry %zu: wrong coordinate count\n", i);
      ++bad;
      continue;
    }
    x = join_by_groups(p, *sys.ring);
    const double xs = std::max(1.0, x.lpNorm<Eigen::Infinity>());
    for (int e = 0; e < sys.size(); ++e) {
      const auto& f = sys.polys[e];
      double scale = std::max(1.0, f.coeff_scale());
      for (int d = 0; d < f.total_degree(); ++d) scale *= xs;
      const double res = std::abs(f.evaluate(x)) / scale;
      worst = std::max(worst, res);
      if (res > tol) {
        std::printf("entry %zu violates equation %d: scaled residual %.3e\n", i, e, res);
        ++bad;
        break;
      }
    }
  }
  std::printf("%zu solutions checked, %d bad, worst scaled residual %.3e\n",
              entries.size(), bad, worst);
  return bad == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ugen: numerical polynomial system solving by equation-by-equation homotopy continuation"};
  app.require_subcommand(1);

  std::string family = "katsura", system_path, out_path = "out.json", sols_path, method = "ugen";
  int n = 5, k = 2, r = 2, drop_eq = -1;
  double tol = 1e-6;
  TrackerFlags flags;

  auto* gen = app.add_subcommand("gen", "Generate a benchmark system file");
  gen->add_option("--family", family, "katsura | cyclic | banded | mle")->required();
  gen->add_option("--n", n, "Family size parameter")->required();
  gen->add_option("--k", k, "Band width (banded family)");
  gen->add_option("--r", r, "Rank bound (mle family)");
  gen->add_option("--seed", flags.seed, "Random seed");
  gen->add_option("--out", out_path, "Output system file")->required();

  auto* solve = app.add_subcommand("solve", "Solve a system file");
  solve->add_option("--method", method, "ugen | regen | total-degree")->required();
  solve->add_option("--system", system_path, "Input system file")->required();
  solve->add_option("--out", out_path, "Output solution file")->required();
  solve->add_option("--drop-eq", drop_eq,
                    "Equation to drop for the equation-by-equation methods "
                    "(default: the last)");
  flags.attach(solve);

  auto* bench = app.add_subcommand(
      "bench", "Dropped-equation comparison of u-generation and regeneration");
  bench->add_option("--family", family, "katsura | cyclic | banded | mle")->required();
  bench->add_option("--n", n, "Family size parameter")->required();
  bench->add_option("--k", k, "Band width (banded family)");
  bench->add_option("--r", r, "Rank bound (mle family)");
  flags.attach(bench);

  auto* verify = app.add_subcommand("verify", "Re-check a solution file");
  verify->add_option("--system", system_path, "System file")->required();
  verify->add_option("--solutions", sols_path, "Solution file")->required();
  verify->add_option("--tol", tol, "Scaled residual tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(family, n, k, r, flags.seed, out_path);
    if (solve->parsed()) return cmd_solve(method, system_path, out_path, drop_eq, flags);
    if (bench->parsed()) return cmd_bench(family, n, k, r, flags);
    if (verify->parsed()) return cmd_verify(system_path, sols_path, tol);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitUsage;
}
