#pragma once

#include <vector>

#include <Eigen/Core>

#include "ugen/complex.hpp"
#include "ugen/ring.hpp"

namespace ugen {

/// A point in a product of projective spaces: one homogeneous coordinate
/// vector per factor. Canonical representatives have unit Euclidean norm per
/// factor and the largest-magnitude coordinate rotated onto the positive real
/// axis.
struct MultiProjPoint {
  std::vector<Eigen::VectorXcd> factors;

  MultiProjPoint() = default;
  explicit MultiProjPoint(std::vector<Eigen::VectorXcd> f)
      : factors(std::move(f)) {}
  explicit MultiProjPoint(Eigen::VectorXcd single) {
    factors.push_back(std::move(single));
  }

  int nfactors() const { return static_cast<int>(factors.size()); }
};

using ProjPoint = MultiProjPoint;

/// Canonical normalization; idempotent bit-for-bit on canonical input.
Eigen::VectorXcd normalize_factor(const Eigen::VectorXcd& v);
MultiProjPoint normalize(const MultiProjPoint& p);

/// Chordal distance between unit-norm representatives of two projective
/// points of the same factor dimension; phase invariant.
double chordal_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// Max over factors of the per-factor chordal distance.
double point_distance(const MultiProjPoint& a, const MultiProjPoint& b);

/// Greedy clustering under point_distance <= tol; returns one representative
/// per cluster in first-seen order. cluster_sizes, when given, receives the
/// size of each surviving cluster.
std::vector<MultiProjPoint> dedup_endpoints(
    const std::vector<MultiProjPoint>& points, double tol = 1e-6,
    std::vector<int>* cluster_sizes = nullptr);

/// One coordinate test in the finite/at-infinity decision: the coordinate
/// `coord` of factor `factor` must be below the threshold (finite_when_small)
/// or above it.
struct CoordCondition {
  int factor = 0;
  int coord = 0;
  bool finite_when_small = true;
};

struct Classification {
  bool finite = true;
  std::vector<int> offending_factors;
};

/// Applies the caller's coordinate pattern to a canonically normalized point.
Classification classify_endpoint(const MultiProjPoint& p,
                                 const std::vector<CoordCondition>& pattern,
                                 double threshold);

/// Splits a full coordinate vector into per-group factors of the ring.
MultiProjPoint split_by_groups(const Eigen::VectorXcd& x, const Ring& ring);

/// Reassembles a full coordinate vector from per-group factors.
Eigen::VectorXcd join_by_groups(const MultiProjPoint& p, const Ring& ring);

}  // namespace ugen
