#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "ugen/univariate.hpp"
#include "ugen/witness.hpp"

using namespace ugen;
using namespace ugen::testing;

namespace {

TrackerSettings fast(std::uint64_t seed = 3) {
  TrackerSettings s;
  s.seed = seed;
  s.threads = 1;
  return s;
}

/// Exact witness set of the conic on the slice x2 = 0: [1 : +-sqrt(2) : 0].
WitnessSet conic_witness(const RingPtr& ring) {
  const double s2 = std::sqrt(2.0);
  WitnessSet w{PolySystem(ring, {parabola_poly(ring)}),
               {parse_poly(ring, "x2")},
               {proj_point({Cx(1), Cx(s2), Cx(0)}),
                proj_point({Cx(1), Cx(-s2), Cx(0)})}};
  w.validate();
  return w;
}

/// Resultant-based solve of a dense quadric/cubic pair in the chart z = 1:
/// the y-resultant is sampled numerically from Sylvester determinants and
/// interpolated, entirely independent of the homotopy machinery.
std::vector<MultiProjPoint> resultant_solve(const MPoly& q, const MPoly& c,
                                            const RingPtr& ring) {
  const int x = 0, y = 1;
  auto coeff_in_y = [&](const MPoly& p, int deg_y, Cx xval) {
    // coefficient of y^deg_y in p(x, y, 1) evaluated at x = xval
    Cx acc(0.0);
    for (const auto& [e, k] : p.terms()) {
      if (e[y] != deg_y) continue;
      Cx m = k;
      for (int i = 0; i < e[x]; ++i) m *= xval;
      acc += m;
    }
    return acc;
  };
  auto sylvester_det = [&](Cx xval) {
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(5, 5);
    // q has y-degree 2, c has y-degree 3.
    for (int row = 0; row < 3; ++row)
      for (int j = 0; j <= 2; ++j) S(row, row + j) = coeff_in_y(q, 2 - j, xval);
    for (int row = 0; row < 2; ++row)
      for (int j = 0; j <= 3; ++j) S(3 + row, row + j) = coeff_in_y(c, 3 - j, xval);
    return S.determinant();
  };
  // Interpolate the degree-6 resultant from 7 samples.
  const int m = 7;
  Eigen::MatrixXcd V(m, m);
  Eigen::VectorXcd rhs(m);
  for (int i = 0; i < m; ++i) {
    const double th = 2.0 * M_PI * i / m + 0.3;
    const Cx xi(1.3 * std::cos(th), 1.3 * std::sin(th));
    Cx p(1.0);
    for (int j = 0; j < m; ++j) {
      V(i, j) = p;
      p *= xi;
    }
    rhs[i] = sylvester_det(xi);
  }
  const Eigen::VectorXcd coef = V.fullPivLu().solve(rhs);
  std::vector<Cx> poly(coef.data(), coef.data() + m);
  while (poly.size() > 1 && std::abs(poly.back()) < 1e-9) poly.pop_back();
  const auto xroots = univariate_roots(poly, 1e-9);

  std::vector<MultiProjPoint> out;
  for (const Cx& xr : xroots) {
    // roots of the quadratic q(xr, y, 1) in y; keep the one killing c.
    std::vector<Cx> qy = {coeff_in_y(q, 0, xr), coeff_in_y(q, 1, xr),
                          coeff_in_y(q, 2, xr)};
    const auto yroots = univariate_roots(qy, 1e-9);
    Cx best = yroots[0];
    double best_res = 1e300;
    Eigen::VectorXcd pt(3);
    for (const Cx& yr : yroots) {
      pt << xr, yr, Cx(1.0);
      const double res = std::abs(c.evaluate(pt));
      if (res < best_res) {
        best_res = res;
        best = yr;
      }
    }
    pt << xr, best, Cx(1.0);
    out.push_back(normalize(MultiProjPoint(pt)));
  }
  return out;
}

}  // namespace

TEST_CASE("total_degree_solve: affine quadratic") {
  auto ring = Ring::affine({"x"});
  SolveDiagnostics diag;
  const auto pts =
      total_degree_solve(PolySystem(ring, {parse_poly(ring, "x^2 - 4")}), fast(), &diag);
  REQUIRE(pts.size() == 2);
  CHECK(diag.paths_tracked == 2);
  // Points come back over the projective closure, coordinates (x, h).
  std::vector<MultiProjPoint> want = {proj_point({Cx(2), Cx(1)}),
                                      proj_point({Cx(-2), Cx(1)})};
  CHECK(same_point_multiset(pts, want, 1e-8));
}

TEST_CASE("total_degree_solve: quadric-cubic pair matches the resultant oracle") {
  auto ring = Ring::affine({"x", "y", "z"});
  Rng rng(99);
  // Dense homogeneous quadric and cubic.
  auto dense = [&](int d) {
    MPoly p(ring);
    ExpVec e(3, 0);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        e[0] = a;
        e[1] = b;
        e[2] = d - a - b;
        p.add_term(e, rng.gauss_complex());
      }
    return p;
  };
  const MPoly q = dense(2);
  const MPoly c = dense(3);
  SolveDiagnostics diag;
  const auto pts = total_degree_solve(PolySystem(ring, {q, c}), fast(17), &diag);
  CHECK(diag.paths_tracked == 6);
  REQUIRE(pts.size() == 6);
  const auto oracle = resultant_solve(q, c, ring);
  REQUIRE(oracle.size() == 6);
  CHECK(same_point_multiset(pts, oracle, 1e-6));
}

TEST_CASE("witness_curve: conic and line degrees") {
  auto ring = p2_ring();
  SolveDiagnostics diag;
  const WitnessSet w =
      witness_curve(PolySystem(ring, {parabola_poly(ring)}), fast(), &diag);
  CHECK(w.dim() == 1);
  CHECK(w.size() == 2);

  const WitnessSet line =
      witness_curve(PolySystem(ring, {parse_poly(ring, "x0 + x1 - x2")}), fast());
  CHECK(line.size() == 1);
}

TEST_CASE("move_slice: identity, composition, and a closed-form target") {
  auto ring = p2_ring();
  const WitnessSet w = conic_witness(ring);

  SUBCASE("same slice returns the same points") {
    const WitnessSet moved = move_slice(w, w.slice, fast());
    CHECK(same_point_multiset(moved.points, w.points, 1e-8));
  }

  SUBCASE("two hops agree with the direct move") {
    Rng rng(5);
    auto mid = std::vector<MPoly>{draw_group_linear(ring, 0, rng)};
    auto fin = std::vector<MPoly>{draw_group_linear(ring, 0, rng)};
    const WitnessSet hop = move_slice(move_slice(w, mid, fast(11)), fin, fast(12));
    const WitnessSet direct = move_slice(w, fin, fast(13));
    CHECK(hop.size() == w.size());
    CHECK(same_point_multiset(hop.points, direct.points, 1e-6));
  }

  SUBCASE("moving to the slice x1 = 0 finds the two closed-form points") {
    const WitnessSet moved = move_slice(w, {parse_poly(ring, "x1")}, fast());
    std::vector<MultiProjPoint> want = {proj_point({Cx(0), Cx(0), Cx(1)}),
                                        proj_point({Cx(1), Cx(0), Cx(-2)})};
    CHECK(same_point_multiset(moved.points, want, 1e-8));
  }
}

TEST_CASE("move_slice: witness cardinality is slice invariant") {
  auto ring = p2_ring();
  WitnessSet w = conic_witness(ring);
  Rng rng(21);
  for (int i = 0; i < 10; ++i) {
    SolveDiagnostics diag;
    w = move_slice(w, {draw_group_linear(ring, 0, rng)}, fast(100 + i), &diag);
    CHECK_FALSE(diag.warning);
    CHECK(w.size() == 2);
  }
}

TEST_CASE("membership: own point, off point, and a published point") {
  auto ring = p2_ring();
  const WitnessSet w = conic_witness(ring);
  CHECK(membership(w, w.points[0], fast(31)));
  CHECK(membership(w, proj_point({Cx(1), Cx(2), Cx(2)}), fast(32)));
  CHECK_FALSE(membership(w, proj_point({Cx(1), Cx(1), Cx(1)}), fast(33)));
}

TEST_CASE("witness_collection: a point in P1 x P1") {
  auto ring = Ring::make({"x0", "x1", "y0", "y1"}, {{0, 1}, {2, 3}});
  // Cut out ([1 : 2], [1 : -1]) by one linear per factor.
  PolySystem F(ring, {parse_poly(ring, "2*x0 - x1"), parse_poly(ring, "y0 + y1")});
  const auto wc = witness_collection(F, 0, fast(41));
  REQUIRE(wc.sets.size() == 1);
  const auto& w = wc.sets.at({0, 0});
  REQUIRE(w.size() == 1);
  MultiProjPoint want;
  want.factors = {Eigen::VectorXcd(2), Eigen::VectorXcd(2)};
  want.factors[0] << Cx(1), Cx(2);
  want.factors[1] << Cx(1), Cx(-1);
  CHECK(point_distance(w.points[0], normalize(want)) < 1e-8);
}

TEST_CASE("witness_collection: bilinear curve in P1 x P1 has bidegree (1,1)") {
  auto ring = Ring::make({"x0", "x1", "y0", "y1"}, {{0, 1}, {2, 3}});
  Rng rng(55);
  MPoly b(ring);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ExpVec e(4, 0);
      e[i] = 1;
      e[2 + j] = 1;
      b.add_term(e, rng.gauss_complex());
    }
  PolySystem F(ring, {b});
  const auto wc = witness_collection(F, 1, fast(56));
  REQUIRE(wc.sets.size() == 2);
  CHECK(wc.sets.at({1, 0}).size() == 1);
  CHECK(wc.sets.at({0, 1}).size() == 1);

  // Bidegree stays (1,1) under independent slice draws.
  const auto wc2 = witness_collection(F, 1, fast(57));
  CHECK(wc2.sets.at({1, 0}).size() == 1);
  CHECK(wc2.sets.at({0, 1}).size() == 1);
}

TEST_CASE("witness invariants: stored points satisfy their equations") {
  auto ring = p2_ring();
  const WitnessSet w = conic_witness(ring);
  w.validate(1e-10);

  WitnessSet bad = w;
  bad.points[0] = proj_point({Cx(1), Cx(1), Cx(1)});
  CHECK_THROWS_AS(bad.validate(), std::runtime_error);
}
