#pragma once

#include <vector>

#include "ugen/ugen_projective.hpp"
#include "ugen/witness.hpp"

namespace ugen {

/// Start data for one regeneration step: witness points replicated onto the
/// linear factors that will deform into g1.
struct RegenPrep {
  /// Per group, the d_g linear factors; the first reuses the witness slice.
  std::vector<std::vector<MPoly>> linears;
  std::vector<MultiProjPoint> starts;
  /// Which (group, factor) each start point came from.
  std::vector<std::pair<int, int>> factor_tag;
  int prep_paths = 0;
  SolveDiagnostics diag;
};

/// Prepares d copies of the witness points of a curve: the first linear factor
/// reuses w's own slice, the remaining d-1 are reached by moving the slice,
/// tracking (d-1) deg X paths.
RegenPrep regen_prepare(const WitnessSet& w, int d,
                        const TrackerSettings& settings);

/// Multihomogeneous preparation: one directional witness set per group, d_g
/// linear factors in group g, (d_g - 1)|W_g| preparation paths each.
RegenPrep regen_prepare_multi(const std::vector<WitnessSet>& directional,
                              const std::vector<int>& multidegree,
                              const TrackerSettings& settings);

/// Regeneration step: deforms the product of the prepared linear factors into
/// g1 on the curve, with the same output contract as intersect_hypersurface
/// (no extra variable, no projection).
std::vector<WitnessSet> regen_intersect(const WitnessSet& w, const MPoly& g1,
                                        const RegenPrep& prep, Cx gamma,
                                        const TrackerSettings& settings,
                                        IntersectDiagnostics* diag = nullptr);

/// Multihomogeneous regeneration step from directional witness sets.
std::vector<WitnessSet> regen_intersect_multi(
    const std::vector<WitnessSet>& directional, const MPoly& g1,
    const RegenPrep& prep, Cx gamma, const TrackerSettings& settings,
    IntersectDiagnostics* diag = nullptr);

struct SavingsReport {
  double predicted_ratio = 0.0;  // ugen paths over regen prep+main paths
  long ugen_paths = 0;
  long regen_paths_main = 0;
  long regen_paths_prep = 0;
};

/// Predicted cost ratio d deg X / (2 d deg X - deg X) = 1 / (2 - 1/d) with the
/// theoretical path counts it comes from.
SavingsReport savings_report(int deg_g1, int deg_X);

}  // namespace ugen
