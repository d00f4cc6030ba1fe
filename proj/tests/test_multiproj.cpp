#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ugen/experiment.hpp"
#include "ugen/multiproj.hpp"
#include "ugen/systems.hpp"

using namespace ugen;
using namespace ugen::testing;

namespace {

TrackerSettings fast(std::uint64_t seed = 3) {
  TrackerSettings s;
  s.seed = seed;
  s.threads = 1;
  return s;
}

RingPtr p1p1() { return Ring::make({"x0", "x1", "y0", "y1"}, {{0, 1}, {2, 3}}); }

MPoly random_biform(const RingPtr& ring, int d, int e, Rng& rng) {
  MPoly p(ring);
  for (int a = 0; a <= d; ++a)
    for (int b = 0; b <= e; ++b) {
      ExpVec ex(ring->nvars(), 0);
      ex[0] = static_cast<std::uint8_t>(a);
      ex[1] = static_cast<std::uint8_t>(d - a);
      ex[2] = static_cast<std::uint8_t>(b);
      ex[3] = static_cast<std::uint8_t>(e - b);
      p.add_term(ex, rng.gauss_complex());
    }
  return p;
}

}  // namespace

TEST_CASE("double cone: recast keeps the polynomials free of cone variables") {
  auto ring = p1p1();
  Rng rng(3);
  PolySystem F(ring, {random_biform(ring, 1, 1, rng)});
  const DoubleConeSystem cone = make_double_cone(F);
  CHECK(cone.extended_ring->nvars() == 6);
  CHECK(cone.extended_ring->has_cone_vars());
  for (const auto& p : cone.F_tilde.polys)
    for (int g = 0; g < cone.extended_ring->ngroups(); ++g)
      CHECK(p.degree_in(cone.extended_ring->cone_var(g)) == 0);
}

TEST_CASE("make_g0_multi: degree-(1,1) variants coincide") {
  auto ring = p1p1();
  Rng rng(7);
  PolySystem F(ring, {random_biform(ring, 1, 1, rng)});
  const DoubleConeSystem cone = make_double_cone(F);
  const MPoly mx = draw_group_linear(ring, 0, rng);
  const MPoly my = draw_group_linear(ring, 1, rng);
  const Cx gamma = rng.unit_complex();

  const MPoly bin = make_g0_multi({1, 1}, {{mx}, {my}}, gamma,
                                  G0Variant::Binomial, cone);
  const MPoly prod = make_g0_multi({1, 1}, {{mx}, {my}}, gamma,
                                   G0Variant::ProductOfLinears, cone);
  CHECK(bin == prod);
  CHECK(bin.multidegree() == std::vector<int>{1, 1});
}

TEST_CASE("make_g0_multi: requested multidegree is attained") {
  auto ring = p1p1();
  Rng rng(9);
  PolySystem F(ring, {random_biform(ring, 1, 1, rng)});
  const DoubleConeSystem cone = make_double_cone(F);
  const MPoly g0 = make_g0_multi({2, 3}, {{draw_group_linear(ring, 0, rng)},
                                          {draw_group_linear(ring, 1, rng)}},
                                 rng.unit_complex(), G0Variant::Binomial, cone);
  CHECK(g0.multidegree() == std::vector<int>{2, 3});

  // Wrong-group linear is rejected.
  CHECK_THROWS_AS(make_g0_multi({1, 1}, {{draw_group_linear(ring, 1, rng)},
                                         {draw_group_linear(ring, 1, rng)}},
                                Cx(1.0), G0Variant::Binomial, cone),
                  std::invalid_argument);
}

TEST_CASE("make_g0_multi: three-group degree (1,2,1)") {
  const PolySystem mle = gen_mle_symmetric(3, 2, random_count_matrix(3, 5));
  const PolySystem hom = homogenize_system(mle);
  const DoubleConeSystem cone = make_double_cone(hom);
  Rng rng(5);
  std::vector<std::vector<MPoly>> lin(3);
  for (int g = 0; g < 3; ++g) lin[g] = {draw_group_linear(hom.ring, g, rng)};
  const MPoly g0 = make_g0_multi({1, 2, 1}, lin, rng.unit_complex(),
                                 G0Variant::Binomial, cone);
  CHECK(g0.multidegree() == std::vector<int>{1, 2, 1});
}

TEST_CASE("expected_path_count: formula and brute-force check") {
  CHECK(expected_path_count({2, 3}, {1, 1}) == 5);
  CHECK(expected_path_count({7, 4}, {0, 0}) == 0);
  CHECK(expected_path_count({5, 10, 3}, {1, 2, 1}) == 5 + 20 + 3);

  // Brute force: a curve of bidegree (2,3) in P1 x P1 is V(h) with h of
  // bidegree (3,2); intersecting with the homotopy's hypersurface at t = 1/2
  // gives as many points as the formula says.
  auto ring = p1p1();
  Rng rng(21);
  const MPoly h = random_biform(ring, 3, 2, rng);
  const MPoly g0 = random_biform(ring, 1, 1, rng);
  const MPoly g1 = random_biform(ring, 1, 1, rng);
  const MPoly g_half = g0.scaled(Cx(0.5)) + g1.scaled(Cx(0.5));
  SolveDiagnostics diag;
  const auto pts =
      mbezout_solve(PolySystem(ring, {h, g_half}), fast(22), &diag);
  CHECK(static_cast<long>(pts.size()) == expected_path_count({2, 3}, {1, 1}));
}

TEST_CASE("u_multiproj_start_points: counts and asymptotic structure") {
  auto ring = p1p1();
  Rng rng(31);
  const MPoly b = random_biform(ring, 1, 1, rng);
  PolySystem F(ring, {b});
  const auto wc = witness_collection(F, 1, fast(31));
  REQUIRE(wc.sets.at({1, 0}).size() == 1);
  REQUIRE(wc.sets.at({0, 1}).size() == 1);

  const DoubleConeSystem cone = make_double_cone(F);
  std::vector<WitnessSet> dirs = {wc.sets.at({1, 0}), wc.sets.at({0, 1})};
  std::vector<std::vector<MPoly>> lin(2);
  for (int g = 0; g < 2; ++g) lin[g] = {draw_group_linear(ring, g, rng)};
  const MPoly g0 =
      make_g0_multi({1, 1}, lin, Cx(1.0), G0Variant::Binomial, cone);

  MultiStartDiagnostics sd;
  const double eps = 1e-5;
  const auto starts =
      u_multiproj_start_points(dirs, g0, eps, Cx(1.0), cone, {1, 1}, &sd);
  CHECK(sd.emitted == 2);  // d |W_x| + e |W_y| = 1 + 1
  REQUIRE(starts.size() == 2);

  // The first start came from W_x: its second factor diverges, i.e. after
  // normalization the cone coordinate dominates.
  const auto& q = starts[0];
  const int v_pos = 2;  // (y0, y1, v) layout within the second factor
  CHECK(std::abs(q.factors[1][v_pos]) > 0.99);
}

TEST_CASE("intersect_curve_multi: two bilinear forms meet in two points") {
  auto ring = p1p1();
  Rng rng(41);
  const MPoly b = random_biform(ring, 1, 1, rng);
  const MPoly g1 = random_biform(ring, 1, 1, rng);
  PolySystem F(ring, {b});
  const auto wc = witness_collection(F, 1, fast(42));

  MultiUGenConfig cfg = MultiUGenConfig::from_seed(43);
  cfg.settings = fast(43);
  MultiIntersectDiagnostics diag;
  std::vector<WitnessSet> dirs = {wc.sets.at({1, 0}), wc.sets.at({0, 1})};
  const WitnessSet out = intersect_curve_multi(dirs, g1, cfg, &diag);

  CHECK(diag.expected_paths == 2);
  CHECK(diag.start_count == 2);
  REQUIRE(out.size() == 2);

  // Independent direct solve of the pair.
  SolveDiagnostics sd;
  const auto direct = mbezout_solve(PolySystem(ring, {b, g1}), fast(44), &sd);
  REQUIRE(direct.size() == 2);
  CHECK(same_point_multiset(out.points, direct, 1e-6));
}

TEST_CASE("intersect_hypersurface_multi: containment keeps witness points") {
  auto ring = p1p1();
  Rng rng(51);
  const MPoly b = random_biform(ring, 1, 1, rng);
  PolySystem F(ring, {b});
  const auto wc = witness_collection(F, 1, fast(52));

  MultiUGenConfig cfg = MultiUGenConfig::from_seed(53);
  cfg.settings = fast(53);
  std::vector<MultiIntersectDiagnostics> diags;
  const auto Y = intersect_hypersurface_multi(wc, b.scaled(Cx(2.0)), cfg, &diags);

  // All witness points lie on V(2b); they are retained under their own types
  // and the dimension-zero entry tracks nothing.
  CHECK(Y.sets.count({1, 0}) == 1);
  CHECK(Y.sets.count({0, 1}) == 1);
  for (const auto& d : diags) CHECK(d.expected_paths == 0);
}

TEST_CASE("eliminate_cone_vars: t = 1 recovers the target and modes agree") {
  auto ring = p1p1();
  Rng rng(61);
  const MPoly b = random_biform(ring, 1, 1, rng);
  const MPoly g1 = random_biform(ring, 1, 1, rng);
  PolySystem F(ring, {b});
  const auto wc = witness_collection(F, 1, fast(62));
  std::vector<WitnessSet> dirs = {wc.sets.at({1, 0}), wc.sets.at({0, 1})};

  MultiUGenConfig base = MultiUGenConfig::from_seed(63);
  base.settings = fast(63);
  const WitnessSet plain = intersect_curve_multi(dirs, g1, base);

  for (ElimMode mode : {ElimMode::Chart, ElimMode::HomotopyEquation}) {
    MultiUGenConfig cfg = base;
    cfg.eliminate_vars = true;
    cfg.elim_mode = mode;
    cfg.elim_t_star = 0.1;
    MultiIntersectDiagnostics diag;
    const WitnessSet out = intersect_curve_multi(dirs, g1, cfg, &diag);
    CHECK(diag.start_count == 2);  // path count unchanged by elimination
    REQUIRE(out.size() == plain.size());
    CHECK(same_point_multiset(out.points, plain.points, 1e-6));
  }
}

TEST_CASE("beyond curves: hypersurface in P2 x P1 cut down to a curve") {
  auto ring = Ring::make({"x0", "x1", "x2", "y0", "y1"}, {{0, 1, 2}, {3, 4}});
  Rng rng(71);
  auto biform = [&](int d, int e) {
    MPoly p(ring);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b)
        for (int c = 0; c <= e; ++c) {
          ExpVec ex(5, 0);
          ex[0] = static_cast<std::uint8_t>(a);
          ex[1] = static_cast<std::uint8_t>(b);
          ex[2] = static_cast<std::uint8_t>(d - a - b);
          ex[3] = static_cast<std::uint8_t>(c);
          ex[4] = static_cast<std::uint8_t>(e - c);
          p.add_term(ex, rng.gauss_complex());
        }
    return p;
  };
  const MPoly f = biform(1, 1);
  const MPoly g1 = biform(1, 1);
  PolySystem F(ring, {f});

  // X = V(f) has dimension 2; its collection has types (2,0) and (1,1).
  const auto wc = witness_collection(F, 2, fast(72));
  REQUIRE(wc.sets.count({2, 0}) == 1);
  REQUIRE(wc.sets.count({1, 1}) == 1);
  CHECK(wc.sets.count({0, 2}) == 0);  // exceeds the P1 factor dimension
  CHECK(wc.sets.at({2, 0}).size() == 1);
  CHECK(wc.sets.at({1, 1}).size() == 1);

  MultiUGenConfig cfg = MultiUGenConfig::from_seed(73);
  cfg.settings = fast(73);
  const auto Y = intersect_hypersurface_multi(wc, g1, cfg);

  // Y = V(f, g1) is a curve; slice counts match direct solves.
  REQUIRE(Y.sets.count({1, 0}) == 1);
  REQUIRE(Y.sets.count({0, 1}) == 1);
  const int w10 = Y.sets.at({1, 0}).size();
  const int w01 = Y.sets.at({0, 1}).size();

  Rng oracle_rng(74);
  auto direct_count = [&](int which_group) {
    std::vector<MPoly> rows = {f, g1, draw_group_linear(ring, which_group, oracle_rng)};
    SolveDiagnostics sd;
    return static_cast<int>(mbezout_solve(PolySystem(ring, rows), fast(75), &sd).size());
  };
  CHECK(w10 == direct_count(0));
  CHECK(w01 == direct_count(1));
}

TEST_CASE("mle (3,2): multiprojective run finds the six critical points") {
  const PolySystem mle = gen_mle_symmetric(3, 2, random_count_matrix(3, 99));
  TrackerSettings s = fast(11);
  s.min_step = 1e-14;
  s.max_corrector_iters = 2;
  ExperimentOptions opt;
  opt.system_name = "mle-3-2";
  opt.epsilon = 1e-5;
  const BenchReport rep = run_dropped_equation_experiment(
      mle, mle_dropped_equation_index(3), Method::UGen, s, opt);
  CHECK(rep.distinct_solutions == 6);

  // Prop-style path-count identity: emitted paths = sum of degree-weighted
  // witness sizes, visible through the report.
  CHECK(rep.paths_main > 0);
  CHECK(rep.arithmetic_ok());
}

TEST_CASE("condition at t = epsilon is worse with cone variables eliminated") {
  const PolySystem mle = gen_mle_symmetric(3, 2, random_count_matrix(3, 7));
  const PolySystem hom = homogenize_system(mle);
  const int drop = mle_dropped_equation_index(3);
  const MPoly g1 = hom.polys[drop];
  std::vector<MPoly> rest;
  for (int i = 0; i < hom.size(); ++i)
    if (i != drop) rest.push_back(hom.polys[i]);
  PolySystem F(hom.ring, rest);

  TrackerSettings s = fast(13);
  const auto wc = witness_collection(F, 1, s);
  const DoubleConeSystem cone = make_double_cone(F);
  const RingPtr& ext = cone.extended_ring;
  Rng rng(17);

  std::vector<WitnessSet> dirs;
  for (int g = 0; g < 3; ++g) {
    std::vector<int> type(3, 0);
    type[g] = 1;
    dirs.push_back(wc.sets.at(type));
  }
  std::vector<std::vector<MPoly>> lin(3);
  for (int g = 0; g < 3; ++g) lin[g] = {draw_group_linear(hom.ring, g, rng)};
  RowHint hint;
  const MPoly g0 = make_g0_multi({1, 2, 1}, lin, Cx(1.0), G0Variant::Binomial,
                                 cone, &hint);

  std::vector<MPoly> srows, trows;
  std::vector<RowHint> hints;
  for (const auto& f : cone.F_tilde.polys) {
    srows.push_back(f);
    trows.push_back(f);
    hints.push_back(RowHint::none());
  }
  srows.push_back(g0);
  trows.push_back(g1.to_ring(ext));
  hints.push_back(hint);
  for (int g = 0; g < 3; ++g) {
    srows.push_back(dirs[g].slice[0].to_ring(ext));
    trows.push_back(MPoly::variable(ext, ext->cone_var(g)));
    hints.push_back(RowHint::none());
  }
  const auto charts = draw_charts(ext, rng);
  Homotopy H = make_straight_line(PolySystem(ext, srows), PolySystem(ext, trows),
                                  Cx(1.0), charts, hints);
  auto elim = eliminate_cone_vars(H, ElimMode::HomotopyEquation, 1e-5);

  const double eps = 1e-5;
  MultiStartDiagnostics sd;
  const auto raw = u_multiproj_start_points(dirs, g0, eps, Cx(1.0), cone,
                                            {1, 2, 1}, &sd);
  REQUIRE(!raw.empty());
  int worse = 0, total = 0;
  for (const auto& p : raw) {
    Eigen::VectorXcd x = to_chart(p, charts, *ext);
    if (!newton_polish(H, x, eps, 1e-9, 10)) continue;
    const double cond_full = condition_estimate(H, x, eps);
    const double cond_red = condition_estimate(*elim, elim->reduce_point(x), eps);
    ++total;
    if (cond_red > cond_full) ++worse;
  }
  REQUIRE(total > 0);
  // The reduced system is strictly worse conditioned at t = epsilon.
  CHECK(worse == total);
}
