#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ugen/mpoly.hpp"
#include "ugen/point.hpp"
#include "ugen/rng.hpp"
#include "ugen/tracker.hpp"

namespace ugen {

/// Counters for one batch of tracked paths plus the filtering that followed.
struct SolveDiagnostics {
  int paths_tracked = 0;
  int successes = 0;
  int at_infinity = 0;
  int failures = 0;
  int singular = 0;
  int filtered = 0;  // successes rejected by residual/regularity tests
  std::vector<int> cluster_sizes;
  bool warning = false;
  std::string note;

  void merge(const SolveDiagnostics& o);
};

/// The witness triple (F, L, W): defining equations, a linear slice of
/// complementary dimension, and the intersection points. dim equals the
/// number of slice linears.
struct WitnessSet {
  PolySystem F;
  std::vector<MPoly> slice;
  std::vector<MultiProjPoint> points;

  int dim() const { return static_cast<int>(slice.size()); }
  int size() const { return static_cast<int>(points.size()); }

  /// Number of slice linears per group.
  std::vector<int> slice_type() const;

  /// Checks every point against F and the slice; throws when a point misses
  /// by more than tol at unit scale.
  void validate(double tol = 1e-8) const;
};

/// Witness point sets of a product-space variety indexed by slice type
/// (a_1,...,a_k), sum a_i = dim. Valid types whose intersection is empty are
/// present with an empty point list. Slices are nested: the type (a_1..a_k)
/// uses the first a_g linears of each group's family, so that adjacent types
/// differ by exactly one linear.
struct WitnessCollection {
  PolySystem F;
  std::map<std::vector<int>, WitnessSet> sets;
  /// Per group, the ordered slice linears the types draw their prefixes from.
  std::vector<std::vector<MPoly>> slice_families;

  int dim() const;
};

/// Drawn per projective factor: one affine-linear chart equation with
/// coefficients on the complex unit sphere.
std::vector<MPoly> draw_charts(const RingPtr& ring, Rng& rng);

/// Random linear form supported on one group (homogeneous).
MPoly draw_group_linear(const RingPtr& ring, int group, Rng& rng);

/// Scales each factor of a projective point so the chart rows evaluate to 1,
/// and returns the assembled full coordinate vector.
Eigen::VectorXcd to_chart(const MultiProjPoint& p,
                          const std::vector<MPoly>& charts, const Ring& ring);

/// True when x is a regular isolated solution of the squared system: passes
/// on comfortable Jacobian conditioning directly, and settles the gray zone
/// with a Newton contraction probe (quadratic at simple roots, rate 1/2 at
/// multiple ones).
bool is_isolated_regular(const PolySystem& squared, const Eigen::VectorXcd& x);

/// The probe itself: perturb by delta, take two Newton steps on the
/// chart-completed square system, succeed on strong contraction.
bool newton_contraction_probe(const PolySystem& squared, const Eigen::VectorXcd& x,
                              double delta);

/// Solves a square-in-chart system over a single-group projective ring by a
/// total-degree homotopy: start rows x_i^{d_i} - c_i x_b^{d_i} with random
/// unit c_i, start points in closed form. Returns deduplicated endpoints that
/// satisfy the system, including points at infinity of any homogenizing
/// variable; callers classify.
std::vector<MultiProjPoint> total_degree_solve(const PolySystem& F,
                                               const TrackerSettings& settings,
                                               SolveDiagnostics* diag = nullptr);

/// Multihomogeneous counterpart for product rings: start rows are products of
/// random linear forms matching each row's per-group degree vector, start
/// points enumerate the group assignments admitted by the capacities. Used
/// where a single-grading total-degree start would be wasteful.
std::vector<MultiProjPoint> mbezout_solve(const PolySystem& F,
                                          const TrackerSettings& settings,
                                          SolveDiagnostics* diag = nullptr);

/// Witness set of a one-dimensional variety: appends a random slice linear
/// per group-dimension deficit, solves, and keeps the regular finite points
/// that satisfy F. Pure dimensionality is the caller's assertion. Throws when
/// no witness point survives.
WitnessSet witness_curve(const PolySystem& F, const TrackerSettings& settings,
                         SolveDiagnostics* diag = nullptr);

/// Moves the witness points of w onto a new slice (F fixed, L ~> L_new).
/// Cardinality drops only through path failures, which set diag->warning.
WitnessSet move_slice(const WitnessSet& w, std::vector<MPoly> L_new,
                      const TrackerSettings& settings,
                      SolveDiagnostics* diag = nullptr);

/// Witness-set membership test: moves the slice to a generic slice through p
/// and reports whether p shows up among the moved points.
bool membership(const WitnessSet& w, const MultiProjPoint& p,
                const TrackerSettings& settings);

/// Witness collection of a pure dim-dimensional variety in a product of
/// projective spaces: one witness set per valid slice type.
WitnessCollection witness_collection(const PolySystem& F, int dim,
                                     const TrackerSettings& settings,
                                     SolveDiagnostics* diag = nullptr);

/// Builds a slice of the given type (counts per group) from the seeded rng.
std::vector<MPoly> draw_slice(const RingPtr& ring, const std::vector<int>& type,
                              Rng& rng);

}  // namespace ugen
