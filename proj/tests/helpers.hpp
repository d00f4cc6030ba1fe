#pragma once

#include <cmath>
#include <vector>

#include "ugen/mpoly.hpp"
#include "ugen/point.hpp"
#include "ugen/rng.hpp"

namespace ugen::testing {

inline bool cx_near(Cx a, Cx b, double tol) { return std::abs(a - b) <= tol; }

/// x1^2 - x0 x2 - 2 x0^2, the plane conic used across the fixtures.
inline MPoly parabola_poly(const RingPtr& ring) {
  return parse_poly(ring, "x1^2 - x0*x2 - 2*x0^2");
}

inline RingPtr p2_ring() { return Ring::affine({"x0", "x1", "x2"}); }

/// 2 x0^2 + x1 x0 - x2^2, the hypersurface the conic is intersected with.
inline MPoly parabola_g1(const RingPtr& ring) {
  return parse_poly(ring, "2*x0^2 + x1*x0 - x2^2");
}

/// Random sparse polynomial of total degree <= deg.
inline MPoly random_poly(const RingPtr& ring, int deg, int nterms, Rng& rng) {
  MPoly p(ring);
  for (int t = 0; t < nterms; ++t) {
    ExpVec e(ring->nvars(), 0);
    int budget = 1 + static_cast<int>(rng.uniform() * deg);
    for (int b = 0; b < budget; ++b) {
      const int v = static_cast<int>(rng.uniform() * ring->nvars());
      ++e[v];
    }
    p.add_term(e, rng.gauss_complex());
  }
  if (p.is_zero()) p.add_term(ExpVec(ring->nvars(), 0), Cx(1.0));
  return p;
}

inline Eigen::VectorXcd random_point(int n, Rng& rng) {
  Eigen::VectorXcd x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.gauss_complex() * 0.5;
  return x;
}

/// Naive term-by-term evaluation with repeated multiplication; the oracle
/// kept independent of MPoly::evaluate.
inline Cx naive_eval(const MPoly& p, const Eigen::VectorXcd& x) {
  Cx acc(0.0);
  for (const auto& [e, c] : p.terms()) {
    Cx m = c;
    for (int v = 0; v < static_cast<int>(e.size()); ++v)
      for (int k = 0; k < e[v]; ++k) m *= x[v];
    acc += m;
  }
  return acc;
}

/// Central finite differences with the given step, entry (i,j).
inline Eigen::MatrixXcd fd_jacobian(const PolySystem& F,
                                    const Eigen::VectorXcd& x, double step) {
  Eigen::MatrixXcd J(F.size(), x.size());
  for (int v = 0; v < x.size(); ++v) {
    Eigen::VectorXcd xp = x, xm = x;
    xp[v] += step;
    xm[v] -= step;
    const Eigen::VectorXcd fp = F.evaluate(xp);
    const Eigen::VectorXcd fm = F.evaluate(xm);
    J.col(v) = (fp - fm) / (2.0 * step);
  }
  return J;
}

/// True when the two point lists agree as multisets under the tolerance.
inline bool same_point_multiset(std::vector<MultiProjPoint> a,
                                std::vector<MultiProjPoint> b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& p : a) {
    bool found = false;
    for (size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      if (point_distance(p, b[j]) <= tol) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

inline MultiProjPoint proj_point(std::initializer_list<Cx> coords) {
  Eigen::VectorXcd v(static_cast<int>(coords.size()));
  int i = 0;
  for (Cx c : coords) v[i++] = c;
  return normalize(MultiProjPoint(std::move(v)));
}

}  // namespace ugen::testing
