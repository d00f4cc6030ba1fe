#pragma once

#include <vector>

#include "ugen/ugen_projective.hpp"
#include "ugen/witness.hpp"

namespace ugen {

/// A multiprojective variety lifted one dimension up in every factor: the
/// ring gains one cone variable per group and the defining polynomials are
/// recast unchanged.
struct DoubleConeSystem {
  RingPtr original_ring;
  RingPtr extended_ring;
  PolySystem F_tilde;
};

DoubleConeSystem make_double_cone(const PolySystem& F);

enum class G0Variant { Binomial, ProductOfLinears };

struct MultiUGenConfig {
  double epsilon = 1e-5;
  G0Variant g0_variant = G0Variant::Binomial;
  Cx gamma{1.0, 0.0};
  Cx g0_gamma{1.0, 0.0};
  bool eliminate_vars = false;
  ElimMode elim_mode = ElimMode::Chart;
  double elim_t_star = 0.1;
  TrackerSettings settings;

  static MultiUGenConfig from_seed(std::uint64_t seed);
};

/// g0 of the requested multidegree in the cone ring. Binomial variant:
/// gamma prod_g (u_g^{d_g} - m_g^{d_g}); product variant: gamma prod_g
/// prod_j (u_g - m_{g,j}). The m linears live in the original group
/// variables and must avoid the start points; groups with d_g = 0 contribute
/// no factor. Returns the polynomial and its structural hint.
MPoly make_g0_multi(const std::vector<int>& multidegree,
                    const std::vector<std::vector<MPoly>>& linears,
                    Cx gamma, G0Variant variant, const DoubleConeSystem& cone,
                    RowHint* hint = nullptr);

/// Sum over groups of d_g * deg_g(X): the number of points on the double cone
/// cut out by the homotopy for 0 < t < 1.
long expected_path_count(const std::vector<int>& X_multidegree,
                         const std::vector<int>& g1_multidegree);

struct MultiStartDiagnostics {
  int emitted = 0;
  int polish_failures = 0;
};

/// Approximate points of V(H_epsilon) from directional witness sets: for each
/// witness point of W_g, the d_g roots of g0 specialized to that factor, with
/// every other factor's cone coordinate set from its slice row asymptotics.
/// Points are emitted unpolished; intersect_hypersurface_multi polishes them
/// against the homotopy before tracking.
std::vector<MultiProjPoint> u_multiproj_start_points(
    const std::vector<WitnessSet>& directional, const MPoly& g0,
    double epsilon, Cx gamma, const DoubleConeSystem& cone,
    const std::vector<int>& g1_multidegree,
    MultiStartDiagnostics* diag = nullptr);

struct MultiIntersectDiagnostics {
  long expected_paths = 0;
  int start_count = 0;
  int polish_failures = 0;
  int paths_tracked = 0;
  int successes = 0;
  int at_infinity = 0;
  int failures = 0;
  std::vector<int> cluster_sizes;
  bool warning = false;
  std::string note;
};

/// Curve case of multiprojective u-generation: directional witness sets of
/// the same curve (one per group, slice type e_g; empty sets allowed, missing
/// group entries are an error at the collection interface). Tracks the cone
/// homotopy from t = epsilon, projects out the cone coordinates, dedups.
/// Returns the 0-dimensional witness set of X intersect V(g1).
WitnessSet intersect_curve_multi(const std::vector<WitnessSet>& directional,
                                 const MPoly& g1, const MultiUGenConfig& cfg,
                                 MultiIntersectDiagnostics* diag = nullptr);

/// General case via the slice-down recursion: for every output type (a_1..a_k)
/// with sum = dim - 1, slices X to a curve and runs the curve case with the
/// collection entries at types a + e_g in the directional roles. Same-dim
/// containment components (witness points already on V(g1)) are returned
/// under their own slice types.
WitnessCollection intersect_hypersurface_multi(
    const WitnessCollection& wc, const MPoly& g1, const MultiUGenConfig& cfg,
    std::vector<MultiIntersectDiagnostics>* diags = nullptr);

/// Eliminates every cone variable by substitution; mode HomotopyEquation is
/// defined only for t >= t_star.
std::shared_ptr<EliminatedHomotopy> eliminate_cone_vars(const Homotopy& H,
                                                        ElimMode mode,
                                                        double t_star);

}  // namespace ugen
