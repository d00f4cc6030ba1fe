#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "ugen/homotopy.hpp"
#include "ugen/point.hpp"
#include "ugen/rng.hpp"

namespace ugen {

struct TrackerSettings {
  double initial_step = 0.05;
  double max_step = 0.05;
  double min_step = 1e-8;
  int max_corrector_iters = 3;
  double corrector_tol = 1e-9;
  int max_steps = 4000;
  double infinity_threshold = 1e-6;
  double endpoint_refine_tol = 1e-10;
  double dedup_tol = 1e-6;
  /// Jacobian reciprocal-condition floor below which an endpoint counts as
  /// numerically rank-deficient.
  double singular_rcond = 1e-9;
  std::uint64_t seed = 2024;
  /// Worker threads for batch tracking; 0 picks the hardware count.
  int threads = 0;
  /// Reject a corrected step when the correction exceeds this fraction of
  /// the predictor displacement (a path-jumping guard).
  double jump_guard_ratio = 0.5;
  /// Re-track step-failed paths once with a fifth of the step sizes and a
  /// deeper minimum step.
  bool retry_failed = true;
  /// Extra whole-batch passes under a fresh gamma for batches that lost
  /// endpoints; start points of a straight-line family do not depend on
  /// gamma. Passes stop early once the pooled endpoint set stops growing.
  int max_rescue_passes = 6;

  void validate() const;  // throws std::invalid_argument on bad combinations
};

enum class PathStatus {
  Success,
  AtInfinity,
  MinStepFailure,
  MaxStepsExceeded,
  Singular,
};

const char* to_string(PathStatus s);

struct PathResult {
  PathStatus status = PathStatus::MinStepFailure;
  /// Chart coordinates at t_reached.
  Eigen::VectorXcd x;
  /// Canonically normalized endpoint (per-group factors of the ring); empty
  /// when no factor layout was supplied.
  MultiProjPoint endpoint;
  double t_reached = 0.0;
  int steps_taken = 0;
  double final_residual = 0.0;
  double final_condition_estimate = 0.0;
};

/// Tracks one continuation path of H from x0 at t_start to t_end with an RK4
/// predictor on the Davidenko ODE and a Newton corrector at fixed t. The step
/// doubles after 4 consecutive accepted steps and halves on corrector
/// failure. When t_end = 1 the endpoint is Newton-refined against H(., 1)
/// after a rank check; earlier stops skip refinement.
PathResult track_path(const HomotopyBase& H, const Eigen::VectorXcd& x0,
                      const TrackerSettings& settings, double t_start = 0.0,
                      const Ring* factor_layout = nullptr, double t_end = 1.0);

/// Element-wise track_path; results are returned in start order regardless of
/// scheduling.
std::vector<PathResult> track_batch(const HomotopyBase& H,
                                    const std::vector<Eigen::VectorXcd>& starts,
                                    const TrackerSettings& settings,
                                    double t_start = 0.0,
                                    const Ring* factor_layout = nullptr,
                                    double t_end = 1.0);

/// Tracks the full homotopy until elim->t activation threshold, then drops
/// the eliminated coordinates and finishes on the reduced system; endpoints
/// are lifted back to full coordinates. With elim null this is track_batch.
std::vector<PathResult> track_batch_eliminated(
    const Homotopy& full, const std::shared_ptr<EliminatedHomotopy>& elim,
    double switch_t, const std::vector<Eigen::VectorXcd>& starts,
    const TrackerSettings& settings, double t_start = 0.0,
    const Ring* factor_layout = nullptr);

/// Builds the homotopy for a given gamma; used by the union-of-passes rescue
/// in the solvers to rerun a whole batch along re-randomized routes. The
/// second member may be null when no elimination is wanted.
using HomotopyFactory = std::function<
    std::pair<Homotopy, std::shared_ptr<EliminatedHomotopy>>(Cx gamma)>;

/// True when a batch shows signs of lost endpoints: a failed path, or two
/// successful paths collapsing onto one endpoint. With ignore_late_failures,
/// failures inside the endgame region t >= 0.9 do not count; solves over
/// Bezout-style start sets expect junk paths to die there.
bool batch_anomalous(const std::vector<PathResult>& results, double dedup_tol,
                     bool ignore_late_failures);

/// Newton iteration on H(., t) at fixed t. Returns true when the scaled
/// residual dropped below tol within max_iters.
bool newton_polish(const HomotopyBase& H, Eigen::VectorXcd& x, double t,
                   double tol, int max_iters);

/// 2-norm condition number sigma_max / sigma_min of the x-Jacobian.
double condition_estimate(const HomotopyBase& H, const Eigen::VectorXcd& x,
                          double t);

double residual_norm(const HomotopyBase& H, const Eigen::VectorXcd& x,
                     double t);

}  // namespace ugen
