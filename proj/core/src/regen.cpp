#include "ugen/regen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ugen {
namespace {

constexpr double kContainTol = 1e-8;

void check_directional(const std::vector<WitnessSet>& directional,
                       const std::vector<int>& multidegree) {
  if (directional.empty())
    throw std::invalid_argument("regen: no directional witness sets");
  const RingPtr& ring = directional[0].F.ring;
  if (static_cast<int>(multidegree.size()) != ring->ngroups() ||
      static_cast<int>(directional.size()) != ring->ngroups())
    throw std::invalid_argument("regen: one witness set and degree per group");
  for (int g = 0; g < ring->ngroups(); ++g) {
    if (directional[g].dim() != 1)
      throw std::invalid_argument("regen: directional witness sets must be curves");
    std::vector<int> want(ring->ngroups(), 0);
    want[g] = 1;
    if (directional[g].slice_type() != want)
      throw std::invalid_argument("regen: directional set sliced in the wrong group");
  }
}

}  // namespace

RegenPrep regen_prepare(const WitnessSet& w, int d,
                        const TrackerSettings& settings) {
  if (d < 1) throw std::invalid_argument("regen_prepare: degree must be >= 1");
  return regen_prepare_multi({w}, {d}, settings);
}

RegenPrep regen_prepare_multi(const std::vector<WitnessSet>& directional,
                              const std::vector<int>& multidegree,
                              const TrackerSettings& settings) {
  check_directional(directional, multidegree);
  const RingPtr& ring = directional[0].F.ring;
  Rng rng(settings.seed ^ 0x726567656eULL);

  RegenPrep prep;
  prep.linears.resize(ring->ngroups());
  for (int g = 0; g < ring->ngroups(); ++g) {
    if (multidegree[g] == 0) continue;
    // First factor reuses the witness slice; its points come for free.
    prep.linears[g].push_back(directional[g].slice[0]);
    for (const auto& p : directional[g].points) {
      prep.starts.push_back(p);
      prep.factor_tag.emplace_back(g, 0);
    }
    for (int j = 1; j < multidegree[g]; ++j) {
      MPoly lin = draw_group_linear(ring, g, rng);
      TrackerSettings s = settings;
      s.seed = rng.child_seed(static_cast<std::uint64_t>(g) * 97 + j);
      SolveDiagnostics d;
      const WitnessSet moved = move_slice(directional[g], {lin}, s, &d);
      prep.prep_paths += static_cast<int>(directional[g].points.size());
      prep.diag.merge(d);
      prep.linears[g].push_back(std::move(lin));
      for (const auto& p : moved.points) {
        prep.starts.push_back(p);
        prep.factor_tag.emplace_back(g, j);
      }
    }
  }
  return prep;
}

std::vector<WitnessSet> regen_intersect(const WitnessSet& w, const MPoly& g1,
                                        const RegenPrep& prep, Cx gamma,
                                        const TrackerSettings& settings,
                                        IntersectDiagnostics* diag) {
  return regen_intersect_multi({w}, g1, prep, gamma, settings, diag);
}

std::vector<WitnessSet> regen_intersect_multi(
    const std::vector<WitnessSet>& directional, const MPoly& g1,
    const RegenPrep& prep, Cx gamma, const TrackerSettings& settings,
    IntersectDiagnostics* diag) {
  const auto d = g1.multidegree();
  check_directional(directional, d);
  const RingPtr& ring = directional[0].F.ring;
  const PolySystem& F = directional[0].F;

  IntersectDiagnostics local;
  std::vector<WitnessSet> out;

  // Same-dimension piece: witness points already on V(g1).
  const double scale = std::max(1.0, g1.coeff_scale());
  for (const auto& wg : directional) {
    std::vector<MultiProjPoint> inside;
    for (const auto& p : wg.points) {
      const Eigen::VectorXcd x = join_by_groups(p, *ring);
      if (std::abs(g1.evaluate(x)) <= kContainTol * scale) inside.push_back(p);
    }
    local.witness_points_in_g1 += static_cast<int>(inside.size());
    if (!inside.empty())
      out.push_back(WitnessSet{wg.F, wg.slice, std::move(inside)});
  }

  // Product of the prepared linear factors deforms into g1.
  std::vector<MPoly> flat;
  for (const auto& per_group : prep.linears)
    for (const auto& l : per_group) flat.push_back(l);
  if (flat.empty()) throw std::invalid_argument("regen: empty preparation");
  MPoly prod = flat[0];
  for (size_t j = 1; j < flat.size(); ++j) prod = prod * flat[j];

  Rng rng(settings.seed ^ 0x72696e74ULL);
  const auto charts = draw_charts(ring, rng);

  std::vector<MPoly> start_rows = F.polys;
  std::vector<MPoly> target_rows = F.polys;
  std::vector<RowHint> hints(F.polys.size());
  start_rows.push_back(std::move(prod));
  target_rows.push_back(g1);
  hints.push_back(RowHint::product(flat));

  const PolySystem start_sys(ring, std::move(start_rows));
  const PolySystem target_sys(ring, std::move(target_rows));

  std::vector<Eigen::VectorXcd> starts;
  starts.reserve(prep.starts.size());
  for (const auto& p : prep.starts) starts.push_back(to_chart(p, charts, *ring));
  local.start_count = static_cast<int>(starts.size());
  local.paths_tracked = static_cast<int>(starts.size());

  std::vector<MultiProjPoint> endpoints;
  int passes = 0;
  size_t union_size = 0;
  for (int pass = 0; pass <= settings.max_rescue_passes; ++pass) {
    const Cx g = (pass == 0) ? gamma : rng.unit_complex();
    Homotopy H = make_straight_line(start_sys, target_sys, g, charts, hints);
    const auto results = track_batch(H, starts, settings, 0.0, ring.get());
    ++passes;
    for (const auto& r : results) {
      const bool candidate = (r.status == PathStatus::Success ||
                              r.status == PathStatus::Singular) &&
                             r.endpoint.nfactors() > 0;
      if (!candidate) {
        if (pass == 0) ++local.failures;
        continue;
      }
      if (pass == 0) ++local.successes;
      endpoints.push_back(r.endpoint);
    }
    if (!batch_anomalous(results, settings.dedup_tol,
                         /*ignore_late_failures=*/false))
      break;
    const size_t now = dedup_endpoints(endpoints, settings.dedup_tol).size();
    if (pass > 0 && now == union_size) break;  // pooled endpoints saturated
    union_size = now;
  }
  if (passes > 1)
    local.note = "regeneration used " + std::to_string(passes) + " gamma passes";
  auto deduped =
      dedup_endpoints(endpoints, settings.dedup_tol, &local.cluster_sizes);

  std::vector<MPoly> Fnew = F.polys;
  Fnew.push_back(g1);
  PolySystem Fsys(ring, Fnew);
  std::vector<MultiProjPoint> kept;
  for (auto& p : deduped) {
    const Eigen::VectorXcd x = join_by_groups(p, *ring);
    bool ok = true;
    for (const auto& f : Fsys.polys) {
      const double s = std::max(1.0, f.coeff_scale());
      if (std::abs(f.evaluate(x)) > 1e-6 * s) ok = false;
    }
    if (ok && !is_isolated_regular(Fsys, x)) ok = false;
    if (ok) kept.push_back(std::move(p));
  }

  if (local.failures > 0) {
    local.warning = true;
    local.note = "regen: " + std::to_string(local.failures) + " failed paths";
  }
  if (!kept.empty()) {
    WitnessSet lower{std::move(Fsys), {}, std::move(kept)};
    lower.validate(1e-6);
    out.push_back(std::move(lower));
  }
  if (diag) *diag = local;
  return out;
}

SavingsReport savings_report(int deg_g1, int deg_X) {
  if (deg_g1 < 1 || deg_X < 1)
    throw std::invalid_argument("savings_report: degrees must be positive");
  SavingsReport r;
  r.ugen_paths = static_cast<long>(deg_g1) * deg_X;
  r.regen_paths_main = r.ugen_paths;
  r.regen_paths_prep = static_cast<long>(deg_g1 - 1) * deg_X;
  r.predicted_ratio = static_cast<double>(r.ugen_paths) /
                      static_cast<double>(r.regen_paths_main + r.regen_paths_prep);
  return r;
}

}  // namespace ugen
