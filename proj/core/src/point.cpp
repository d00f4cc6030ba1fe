#include "ugen/point.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ugen {
namespace {

bool is_canonical(const Eigen::VectorXcd& v, int* imax_out) {
  const double n2 = v.squaredNorm();
  if (std::abs(n2 - 1.0) > 64.0 * 1e-16) return false;
  int imax = 0;
  double best = -1.0;
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::norm(v[i]);
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  if (imax_out) *imax_out = imax;
  return v[imax].imag() == 0.0 && v[imax].real() > 0.0;
}

}  // namespace

Eigen::VectorXcd normalize_factor(const Eigen::VectorXcd& v) {
  if (v.size() == 0) throw std::invalid_argument("normalize: empty factor");
  int imax = 0;
  if (is_canonical(v, &imax)) return v;  // keeps normalization idempotent bit-for-bit
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw std::invalid_argument("normalize: zero or non-finite factor");
  Eigen::VectorXcd out = v / norm;
  imax = 0;
  double best = -1.0;
  for (int i = 0; i < out.size(); ++i) {
    const double a = std::norm(out[i]);
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  const double mag = std::abs(out[imax]);
  const Cx phase = out[imax] / mag;
  out *= std::conj(phase);
  out[imax] = Cx(std::abs(out[imax]), 0.0);
  return out;
}

MultiProjPoint normalize(const MultiProjPoint& p) {
  MultiProjPoint out;
  out.factors.reserve(p.factors.size());
  for (const auto& f : p.factors) out.factors.push_back(normalize_factor(f));
  return out;
}

double chordal_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("chordal_distance: dimension mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  const double inner = std::abs(a.dot(b));  // conjugate inner product
  const double cosang = std::min(1.0, inner / (na * nb));
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - cosang)));
}

double point_distance(const MultiProjPoint& a, const MultiProjPoint& b) {
  if (a.nfactors() != b.nfactors())
    throw std::invalid_argument("point_distance: factor count mismatch");
  double d = 0.0;
  for (int i = 0; i < a.nfactors(); ++i)
    d = std::max(d, chordal_distance(a.factors[i], b.factors[i]));
  return d;
}

std::vector<MultiProjPoint> dedup_endpoints(
    const std::vector<MultiProjPoint>& points, double tol,
    std::vector<int>* cluster_sizes) {
  std::vector<MultiProjPoint> reps;
  std::vector<int> sizes;
  for (const auto& p : points) {
    bool merged = false;
    for (size_t i = 0; i < reps.size(); ++i) {
      if (point_distance(p, reps[i]) <= tol) {
        ++sizes[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      reps.push_back(p);
      sizes.push_back(1);
    }
  }
  if (cluster_sizes) *cluster_sizes = std::move(sizes);
  return reps;
}

Classification classify_endpoint(const MultiProjPoint& p,
                                 const std::vector<CoordCondition>& pattern,
                                 double threshold) {
  Classification out;
  for (const auto& cond : pattern) {
    if (cond.factor < 0 || cond.factor >= p.nfactors())
      throw std::invalid_argument("classify_endpoint: factor out of range");
    const auto& f = p.factors[cond.factor];
    if (cond.coord < 0 || cond.coord >= f.size())
      throw std::invalid_argument("classify_endpoint: coordinate out of range");
    const double mag = std::abs(f[cond.coord]);
    const bool ok = cond.finite_when_small ? (mag < threshold) : (mag >= threshold);
    if (!ok) {
      out.finite = false;
      if (std::find(out.offending_factors.begin(), out.offending_factors.end(),
                    cond.factor) == out.offending_factors.end())
        out.offending_factors.push_back(cond.factor);
    }
  }
  return out;
}

MultiProjPoint split_by_groups(const Eigen::VectorXcd& x, const Ring& ring) {
  if (x.size() != ring.nvars())
    throw std::invalid_argument("split_by_groups: dimension mismatch");
  MultiProjPoint p;
  p.factors.reserve(ring.ngroups());
  for (int g = 0; g < ring.ngroups(); ++g) {
    const auto& gv = ring.group(g);
    Eigen::VectorXcd f(gv.size());
    for (size_t i = 0; i < gv.size(); ++i) f[i] = x[gv[i]];
    p.factors.push_back(std::move(f));
  }
  return p;
}

Eigen::VectorXcd join_by_groups(const MultiProjPoint& p, const Ring& ring) {
  if (p.nfactors() != ring.ngroups())
    throw std::invalid_argument("join_by_groups: factor count mismatch");
  Eigen::VectorXcd x(ring.nvars());
  for (int g = 0; g < ring.ngroups(); ++g) {
    const auto& gv = ring.group(g);
    if (p.factors[g].size() != static_cast<int>(gv.size()))
      throw std::invalid_argument("join_by_groups: factor dimension mismatch");
    for (size_t i = 0; i < gv.size(); ++i) x[gv[i]] = p.factors[g][i];
  }
  return x;
}

}  // namespace ugen
