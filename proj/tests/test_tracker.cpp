#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ugen/tracker.hpp"

using namespace ugen;
using namespace ugen::testing;

namespace {

TrackerSettings quick_settings(std::uint64_t seed = 7) {
  TrackerSettings s;
  s.seed = seed;
  s.threads = 1;
  return s;
}

}  // namespace

TEST_CASE("homotopy: constant family tracks to the start point") {
  auto ring = Ring::affine({"x"});
  const MPoly f = parse_poly(ring, "x^2 - 2*x + 5");
  Homotopy H = make_straight_line(PolySystem(ring, {f}), PolySystem(ring, {f}),
                                  Cx(1.0), {});
  Eigen::VectorXcd x0(1);
  x0 << Cx(1.0, 2.0);  // a root of f
  const auto res = track_path(H, x0, quick_settings());
  CHECK(res.status == PathStatus::Success);
  CHECK(std::abs(res.x[0] - Cx(1.0, 2.0)) < 1e-9);
}

TEST_CASE("homotopy: value at t = 1/2 is the mean of gamma*start and target") {
  Rng rng(19);
  auto ring = Ring::affine({"a", "b"});
  const Cx gamma = rng.unit_complex();
  std::vector<MPoly> s, t;
  for (int i = 0; i < 2; ++i) {
    s.push_back(random_poly(ring, 3, 6, rng));
    // Same multidegree target: reuse the support with fresh coefficients.
    MPoly ti(ring);
    for (const auto& [e, c] : s.back().terms()) ti.add_term(e, rng.gauss_complex());
    t.push_back(std::move(ti));
  }
  Homotopy H = make_straight_line(PolySystem(ring, s), PolySystem(ring, t), gamma, {});
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXcd x = random_point(2, rng);
    Eigen::VectorXcd Hv;
    H.eval(x, 0.5, Hv);
    for (int i = 0; i < 2; ++i) {
      const Cx want = 0.5 * (gamma * s[i].evaluate(x) + t[i].evaluate(x));
      CHECK(std::abs(Hv[i] - want) <= 1e-12 * (1.0 + std::abs(want)));
    }
  }
}

TEST_CASE("homotopy: mismatched degrees are rejected") {
  auto ring = Ring::affine({"x"});
  CHECK_THROWS_AS(make_straight_line(PolySystem(ring, {parse_poly(ring, "x^2 - 1")}),
                                     PolySystem(ring, {parse_poly(ring, "x^3 - 1")}),
                                     Cx(1.0), {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_straight_line(PolySystem(ring, {parse_poly(ring, "x - 1")}),
                                     PolySystem(ring, {parse_poly(ring, "x - 2")}),
                                     Cx(2.0), {}),
                  std::invalid_argument);
}

TEST_CASE("track_path: univariate root path x^2-1 to x^2-4") {
  auto ring = Ring::affine({"x"});
  Homotopy H = make_straight_line(PolySystem(ring, {parse_poly(ring, "x^2 - 1")}),
                                  PolySystem(ring, {parse_poly(ring, "x^2 - 4")}),
                                  Cx(1.0), {});
  Eigen::VectorXcd x0(1);
  x0 << Cx(1.0);
  const auto res = track_path(H, x0, quick_settings());
  REQUIRE(res.status == PathStatus::Success);
  // Closed form: x(t) = sqrt(1 + 3t), so x(1) = 2.
  CHECK(std::abs(res.x[0] - Cx(2.0)) < 1e-10);
  CHECK(res.final_residual <= 1e-8);
}

TEST_CASE("track_batch: empty input, order independence, determinism") {
  auto ring = Ring::affine({"x"});
  Homotopy H = make_straight_line(PolySystem(ring, {parse_poly(ring, "x^2 - 1")}),
                                  PolySystem(ring, {parse_poly(ring, "x^2 - 4")}),
                                  Cx(1.0), {});
  CHECK(track_batch(H, {}, quick_settings()).empty());

  std::vector<Eigen::VectorXcd> starts(2, Eigen::VectorXcd(1));
  starts[0][0] = Cx(1.0);
  starts[1][0] = Cx(-1.0);
  const auto batch = track_batch(H, starts, quick_settings());
  REQUIRE(batch.size() == 2);
  const auto lone0 = track_path(H, starts[0], quick_settings());
  const auto lone1 = track_path(H, starts[1], quick_settings());
  CHECK(std::abs(batch[0].x[0] - lone0.x[0]) == 0.0);
  CHECK(std::abs(batch[1].x[0] - lone1.x[0]) == 0.0);
  CHECK(std::abs(batch[0].x[0] - Cx(2.0)) < 1e-10);
  CHECK(std::abs(batch[1].x[0] + Cx(2.0)) < 1e-10);

  // Multi-threaded scheduling returns results in start order with identical values.
  TrackerSettings threaded = quick_settings();
  threaded.threads = 4;
  const auto batch2 = track_batch(H, starts, threaded);
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(batch2[i].x[0] - batch[i].x[0]) == 0.0);
}

TEST_CASE("classify_endpoint: designated coordinate patterns") {
  const double thr = 1e-6;
  // Cone convention: finite endpoints have u near zero.
  const std::vector<CoordCondition> cone = {{0, 0, true}};
  CHECK(classify_endpoint(proj_point({Cx(0), Cx(1), Cx(-1), Cx(-1)}), cone, thr).finite);
  const auto vertex = classify_endpoint(proj_point({Cx(1), Cx(0), Cx(0), Cx(0)}), cone, thr);
  CHECK_FALSE(vertex.finite);
  CHECK(vertex.offending_factors == std::vector<int>{0});

  // Affine convention: finite endpoints keep the homogenizing coordinate large.
  const std::vector<CoordCondition> affine = {{0, 0, false}};
  CHECK(classify_endpoint(proj_point({Cx(0.5), Cx(1), Cx(2), Cx(2)}), affine, thr).finite);
  CHECK_FALSE(classify_endpoint(proj_point({Cx(1e-9), Cx(1), Cx(2), Cx(2)}), affine, thr).finite);

  // Several factors at once, all three coordinates must stay large.
  MultiProjPoint p;
  p.factors = {Eigen::VectorXcd(2), Eigen::VectorXcd(2), Eigen::VectorXcd(2)};
  p.factors[0] << Cx(1), Cx(2);
  p.factors[1] << Cx(1e-9), Cx(1);
  p.factors[2] << Cx(1), Cx(0);
  const std::vector<CoordCondition> mle = {{0, 0, false}, {1, 0, false}, {2, 0, false}};
  const auto cls = classify_endpoint(normalize(p), mle, thr);
  CHECK_FALSE(cls.finite);
  CHECK(cls.offending_factors == std::vector<int>{1});
}

TEST_CASE("dedup_endpoints: clustering behavior") {
  Rng rng(44);
  // Two copies of the same point collapse.
  auto p = proj_point({Cx(1), Cx(2), Cx(3)});
  CHECK(dedup_endpoints({p, p}, 1e-6).size() == 1);

  // The four conic endpoints stay distinct.
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<MultiProjPoint> four = {
      proj_point({Cx(0), Cx(1), Cx(-1), Cx(-1)}),
      proj_point({Cx(0), Cx(1), Cx(2), Cx(2)}),
      proj_point({Cx(0), Cx(1), Cx(-phi), Cx(phi - 1)}),
      proj_point({Cx(0), Cx(1), Cx(phi - 1), Cx(-phi)})};
  CHECK(dedup_endpoints(four, 1e-6).size() == 4);

  // Small perturbations join their host cluster.
  std::vector<MultiProjPoint> pts;
  std::vector<MultiProjPoint> base;
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXcd v(4);
    for (int k = 0; k < 4; ++k) v[k] = rng.gauss_complex();
    base.push_back(normalize(MultiProjPoint(v)));
    pts.push_back(base.back());
    Eigen::VectorXcd w = v;
    for (int k = 0; k < 4; ++k) w[k] += 1e-9 * rng.gauss_complex();
    pts.push_back(normalize(MultiProjPoint(w)));
  }
  std::vector<int> sizes;
  const auto reps = dedup_endpoints(pts, 1e-6, &sizes);
  CHECK(reps.size() == 10);
  for (int s : sizes) CHECK(s == 2);
}

TEST_CASE("normalize: canonical form is idempotent bit-for-bit") {
  Rng rng(91);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXcd v(5);
    for (int i = 0; i < 5; ++i) v[i] = 3.0 * rng.gauss_complex();
    const auto once = normalize(MultiProjPoint(v));
    const auto twice = normalize(once);
    for (int i = 0; i < 5; ++i) {
      CHECK(once.factors[0][i].real() == twice.factors[0][i].real());
      CHECK(once.factors[0][i].imag() == twice.factors[0][i].imag());
    }
    CHECK(std::abs(once.factors[0].norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("tracker settings validation") {
  TrackerSettings s;
  s.min_step = 0.5;
  s.initial_step = 0.1;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  TrackerSettings s2;
  s2.max_corrector_iters = 0;
  CHECK_THROWS_AS(s2.validate(), std::invalid_argument);
}
