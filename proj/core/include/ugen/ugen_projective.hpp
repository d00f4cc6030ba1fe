#pragma once

#include <optional>
#include <vector>

#include "ugen/witness.hpp"

namespace ugen {

/// Knobs for one projective u-generation intersection.
struct UGenConfig {
  /// Homotopy gamma, unit modulus.
  Cx gamma{1.0, 0.0};
  /// The gamma inside g0 = gamma (u^d - ell0^d).
  Cx g0_gamma{1.0, 0.0};
  /// Fixed ell0 for g0; drawn from the seed and redrawn until it avoids the
  /// start points when absent.
  std::optional<MPoly> ell0;
  bool eliminate_u = false;
  ElimMode elim_mode = ElimMode::Chart;
  /// Elimination activates only once t passes this threshold.
  double elim_t_star = 0.1;
  TrackerSettings settings;

  static UGenConfig from_seed(std::uint64_t seed);
};

/// Path accounting of one intersection step.
struct IntersectDiagnostics {
  int start_count = 0;
  int paths_tracked = 0;
  int successes = 0;
  int at_infinity = 0;
  int failures = 0;
  int witness_points_in_g1 = 0;
  std::vector<int> cluster_sizes;
  bool warning = false;
  std::string note;
};

/// g0 = gamma (u^d - ell0^d) in the cone ring. ell0 must not involve the cone
/// variable u_var; the result is homogeneous of degree d.
MPoly make_g0(int d, const MPoly& ell0, int u_var, Cx gamma);

/// Structural form of a g0 produced by make_g0, for fast evaluation.
RowHint g0_hint(int d, const MPoly& ell0, int u_var, Cx gamma);

/// Start points for the cone homotopy: for each witness point x* of the curve
/// w, the deg(g0) roots u of g0(u, x*) = 0 give [u : x*]. Returns the witness
/// set (F + {g0}, {ell}, S0) in the cone ring with |S0| = deg(g0) |W| exactly.
WitnessSet u_start_points(const WitnessSet& w, const MPoly& g0);

/// One u-generation step: witness sets for the equidimensional components of
/// X intersected with V(g1). Output drops empty components. Tracks exactly
/// deg(g1) * |W \ V(g1)| paths, reported in diag.
std::vector<WitnessSet> intersect_hypersurface(const WitnessSet& w,
                                               const MPoly& g1,
                                               const UGenConfig& cfg,
                                               IntersectDiagnostics* diag = nullptr);

/// Substitutes u away using the chart row (Chart) or the moving slice row
/// (HomotopyEquation, defined only for t >= t_star > 0).
std::shared_ptr<EliminatedHomotopy> eliminate_u_mode(const Homotopy& H,
                                                     ElimMode mode,
                                                     double t_star = 0.0);

/// Equation-by-equation cascade over a homogeneous system: starting from a
/// witness point of the ambient projective space, intersects with each
/// polynomial in turn and prunes components contained in surviving ones.
std::vector<WitnessSet> cascade(const PolySystem& F, const UGenConfig& cfg,
                                std::vector<IntersectDiagnostics>* diags = nullptr);

/// Erases every witness set whose points all pass membership against another
/// surviving component of the same or higher dimension. Checks run in
/// descending dimension, then insertion order.
std::vector<WitnessSet> eliminate_redundant(std::vector<WitnessSet> C,
                                            const TrackerSettings& settings);

}  // namespace ugen
