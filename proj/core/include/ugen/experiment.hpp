#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ugen/point.hpp"
#include "ugen/tracker.hpp"

namespace ugen {

enum class Method { UGen, Regen, TotalDegree };

const char* to_string(Method m);

/// One row of a benchmark table: path accounting and outcome counts for one
/// method on one system. The arithmetic invariant
/// paths_prep + paths_main = successes + at_infinity + failures
/// holds on every report.
struct BenchReport {
  std::string system_name;
  Method method = Method::UGen;
  int paths_prep = 0;
  int paths_main = 0;
  int successes = 0;
  int at_infinity = 0;
  int failures = 0;
  int distinct_solutions = 0;
  double wall_time = 0.0;  // seconds, machine-local
  std::uint64_t seed = 0;

  // Shared preparation outside the per-method accounting.
  int witness_size = 0;
  int witness_paths = 0;
  double witness_time = 0.0;

  bool arithmetic_ok() const {
    return paths_prep + paths_main == successes + at_infinity + failures;
  }
};

struct ExperimentOptions {
  double epsilon = 1e-5;
  std::string system_name;
  /// Retain the distinct finite solutions.
  std::vector<MultiProjPoint>* solutions_out = nullptr;
};

/// The dropped-equation experiment: homogenize (per variable group), drop the
/// equation at which_eq, build the witness data of the resulting curve by a
/// total-degree (single factor) or linear-product (several factors) homotopy,
/// then intersect back with the dropped equation by the chosen method.
/// Solutions are the deduplicated finite endpoints: every homogenizing
/// coordinate above the infinity threshold after normalization.
BenchReport run_dropped_equation_experiment(const PolySystem& system,
                                            int which_eq, Method method,
                                            const TrackerSettings& settings,
                                            const ExperimentOptions& opt = {});

/// Direct solve of a square system (homogenized as needed) by total-degree or
/// linear-product homotopy; the baseline the equation-by-equation methods are
/// compared against.
BenchReport run_direct_solve(const PolySystem& system,
                             const TrackerSettings& settings,
                             const ExperimentOptions& opt = {});

}  // namespace ugen
