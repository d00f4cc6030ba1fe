#include "ugen/experiment.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "ugen/multiproj.hpp"
#include "ugen/regen.hpp"
#include "ugen/ugen_projective.hpp"
#include "ugen/witness.hpp"

namespace ugen {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

/// Finite means every homogenizing coordinate stays above the threshold after
/// normalization; rings without homogenizers have no condition.
bool is_finite_point(const MultiProjPoint& p, const Ring& ring, double threshold) {
  for (int g = 0; g < ring.ngroups(); ++g) {
    const int h = ring.homog_var(g);
    if (h < 0) continue;
    const auto& gv = ring.group(g);
    for (size_t c = 0; c < gv.size(); ++c) {
      if (gv[c] == h && std::abs(p.factors[g][c]) < threshold) return false;
    }
  }
  return true;
}

std::vector<MultiProjPoint> finite_points(const std::vector<MultiProjPoint>& pts,
                                          const Ring& ring, double threshold) {
  std::vector<MultiProjPoint> out;
  for (const auto& p : pts)
    if (is_finite_point(p, ring, threshold)) out.push_back(p);
  return out;
}

PolySystem prepare_homogeneous(const PolySystem& system) {
  if (system.is_group_homogeneous()) return system;
  return homogenize_system(system);
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::UGen: return "ugen";
    case Method::Regen: return "regen";
    case Method::TotalDegree: return "total-degree";
  }
  return "?";
}

BenchReport run_dropped_equation_experiment(const PolySystem& system,
                                            int which_eq, Method method,
                                            const TrackerSettings& settings,
                                            const ExperimentOptions& opt) {
  if (which_eq < 0 || which_eq >= system.size())
    throw std::invalid_argument("experiment: dropped equation index out of range");
  if (method == Method::TotalDegree)
    throw std::invalid_argument("experiment: use run_direct_solve for total-degree");

  BenchReport report;
  report.system_name = opt.system_name;
  report.method = method;
  report.seed = settings.seed;

  const PolySystem hom = prepare_homogeneous(system);
  const RingPtr& ring = hom.ring;
  const int k = ring->ngroups();

  const MPoly g1 = hom.polys[which_eq];
  std::vector<MPoly> rest;
  for (int i = 0; i < hom.size(); ++i)
    if (i != which_eq) rest.push_back(hom.polys[i]);
  PolySystem F(ring, std::move(rest));

  std::vector<MultiProjPoint> solutions;

  if (k == 1) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveDiagnostics wdiag;
    const WitnessSet w = witness_curve(F, settings, &wdiag);
    report.witness_size = w.size();
    report.witness_paths = wdiag.paths_tracked;
    report.witness_time = seconds_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    IntersectDiagnostics diag;
    std::vector<WitnessSet> pieces;
    if (method == Method::UGen) {
      UGenConfig cfg = UGenConfig::from_seed(settings.seed);
      cfg.settings = settings;
      pieces = intersect_hypersurface(w, g1, cfg, &diag);
    } else {
      const int d = g1.multidegree()[0];
      RegenPrep prep = regen_prepare(w, d, settings);
      report.paths_prep = prep.prep_paths;
      report.successes += prep.diag.successes;
      report.failures += prep.diag.failures + prep.diag.singular;
      Rng rng(settings.seed ^ 0x72676d61ULL);
      pieces = regen_intersect(w, g1, prep, rng.unit_complex(), settings, &diag);
    }
    report.wall_time = seconds_since(t1);
    report.paths_main = diag.paths_tracked;
    report.successes += diag.successes;
    report.at_infinity += diag.at_infinity;
    report.failures += diag.failures;

    for (const auto& piece : pieces) {
      if (piece.dim() != 0) continue;
      const auto fin = finite_points(piece.points, *ring, settings.infinity_threshold);
      report.distinct_solutions = static_cast<int>(fin.size());
      solutions = fin;
    }
  } else {
    const auto t0 = std::chrono::steady_clock::now();
    SolveDiagnostics wdiag;
    WitnessCollection wc = witness_collection(F, 1, settings, &wdiag);
    // The curve of interest is the closure of the affine solution locus; the
    // recast system also vanishes on extraneous loci inside the coordinate
    // hyperplanes at infinity, whose slice points are discarded here.
    for (auto& [type, wset] : wc.sets) {
      wset.points =
          finite_points(wset.points, *ring, settings.infinity_threshold);
      report.witness_size += wset.size();
    }
    report.witness_paths = wdiag.paths_tracked;
    report.witness_time = seconds_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    if (method == Method::UGen) {
      MultiUGenConfig cfg = MultiUGenConfig::from_seed(settings.seed);
      cfg.settings = settings;
      cfg.epsilon = opt.epsilon;
      std::vector<MultiIntersectDiagnostics> diags;
      const WitnessCollection Y = intersect_hypersurface_multi(wc, g1, cfg, &diags);
      for (const auto& d : diags) {
        report.paths_main += d.paths_tracked;
        report.successes += d.successes;
        report.at_infinity += d.at_infinity;
        report.failures += d.failures;
      }
      const std::vector<int> zero(ring->ngroups(), 0);
      const auto it = Y.sets.find(zero);
      if (it != Y.sets.end()) {
        const auto fin =
            finite_points(it->second.points, *ring, settings.infinity_threshold);
        report.distinct_solutions = static_cast<int>(fin.size());
        solutions = fin;
      }
    } else {
      const auto d = g1.multidegree();
      std::vector<WitnessSet> directional;
      for (int g = 0; g < k; ++g) {
        std::vector<int> type(k, 0);
        type[g] = 1;
        const auto it = wc.sets.find(type);
        if (it == wc.sets.end())
          throw std::runtime_error("experiment: missing directional witness set");
        directional.push_back(it->second);
      }
      RegenPrep prep = regen_prepare_multi(directional, d, settings);
      report.paths_prep = prep.prep_paths;
      report.successes += prep.diag.successes;
      report.failures += prep.diag.failures + prep.diag.singular;
      Rng rng(settings.seed ^ 0x72676d61ULL);
      IntersectDiagnostics diag;
      const auto pieces = regen_intersect_multi(directional, g1, prep,
                                                rng.unit_complex(), settings, &diag);
      report.paths_main = diag.paths_tracked;
      report.successes += diag.successes;
      report.at_infinity += diag.at_infinity;
      report.failures += diag.failures;
      for (const auto& piece : pieces) {
        if (piece.dim() != 0) continue;
        const auto fin =
            finite_points(piece.points, *ring, settings.infinity_threshold);
        report.distinct_solutions = static_cast<int>(fin.size());
        solutions = fin;
      }
    }
    report.wall_time = seconds_since(t1);
  }

  if (opt.solutions_out) *opt.solutions_out = std::move(solutions);
  return report;
}

BenchReport run_direct_solve(const PolySystem& system,
                             const TrackerSettings& settings,
                             const ExperimentOptions& opt) {
  BenchReport report;
  report.system_name = opt.system_name;
  report.method = Method::TotalDegree;
  report.seed = settings.seed;

  const PolySystem hom = prepare_homogeneous(system);
  const RingPtr& ring = hom.ring;

  const auto t0 = std::chrono::steady_clock::now();
  SolveDiagnostics diag;
  const auto points = (ring->ngroups() == 1) ? total_degree_solve(hom, settings, &diag)
                                             : mbezout_solve(hom, settings, &diag);
  report.wall_time = seconds_since(t0);
  report.paths_main = diag.paths_tracked;
  report.successes = diag.successes;
  report.failures = diag.failures + diag.singular + diag.filtered;

  auto fin = finite_points(points, *ring, settings.infinity_threshold);
  report.distinct_solutions = static_cast<int>(fin.size());
  if (opt.solutions_out) *opt.solutions_out = std::move(fin);
  return report;
}

}  // namespace ugen
