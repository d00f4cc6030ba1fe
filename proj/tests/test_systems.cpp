#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ugen/experiment.hpp"
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

}  // namespace

TEST_CASE("katsura: shape and the delta-sequence identity") {
  for (int n : {2, 4, 8}) {
    const PolySystem F = gen_katsura(n);
    CHECK(F.size() == n + 1);
    CHECK(F.ring->nvars() == n + 1);
    CHECK(F.polys[0].total_degree() == 1);
    for (int m = 1; m <= n; ++m) CHECK(F.polys[m].total_degree() == 2);

    // x = (1, 0, ..., 0) solves every equation.
    Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(n + 1);
    delta[0] = Cx(1.0);
    for (const auto& f : F.polys) CHECK(std::abs(f.evaluate(delta)) < 1e-14);
  }
  CHECK_THROWS_AS(gen_katsura(1), std::invalid_argument);
}

TEST_CASE("katsura: the direct solve saturates the 2^n root count") {
  const PolySystem F = gen_katsura(4);
  const BenchReport rep = run_direct_solve(F, fast(5));
  CHECK(rep.distinct_solutions == 16);
  CHECK(rep.paths_main == 16);
}

TEST_CASE("cyclic: shape and the brute-force count for n = 3") {
  const PolySystem F = gen_cyclic(5);
  CHECK(F.size() == 5);
  for (int m = 1; m < 5; ++m) CHECK(F.polys[m - 1].total_degree() == m);
  CHECK(F.polys[4].total_degree() == 5);
  CHECK_THROWS_AS(gen_cyclic(2), std::invalid_argument);

  // n = 3: solutions are the permutations of the three cube roots of unity.
  const PolySystem C3 = gen_cyclic(3);
  const BenchReport rep = run_direct_solve(C3, fast(7));
  CHECK(rep.distinct_solutions == 6);

  std::vector<MultiProjPoint> sols;
  ExperimentOptions opt;
  opt.solutions_out = &sols;
  run_direct_solve(C3, fast(7), opt);
  const Cx w1 = std::polar(1.0, 2.0 * M_PI / 3.0);
  const Cx w2 = std::conj(w1);
  std::vector<std::array<Cx, 3>> perms = {{Cx(1), w1, w2}, {Cx(1), w2, w1},
                                          {w1, Cx(1), w2}, {w2, Cx(1), w1},
                                          {w1, w2, Cx(1)}, {w2, w1, Cx(1)}};
  std::vector<MultiProjPoint> want;
  for (const auto& p : perms)
    want.push_back(proj_point({p[0], p[1], p[2], Cx(1.0)}));  // (x..., h)
  CHECK(same_point_multiset(sols, want, 1e-7));
}

TEST_CASE("banded quadrics: shape and determinism") {
  const PolySystem F = gen_banded_quadrics(8, 3, 99);
  CHECK(F.size() == 8);
  CHECK(F.ring->nvars() == 9);
  CHECK(F.polys[0].total_degree() == 1);
  for (int i = 1; i < 8; ++i) CHECK(F.polys[i].total_degree() == 2);
  CHECK(F.is_group_homogeneous());

  const PolySystem G = gen_banded_quadrics(8, 3, 99);
  for (int i = 0; i < 8; ++i) CHECK(F.polys[i].to_string() == G.polys[i].to_string());
  const PolySystem H = gen_banded_quadrics(8, 3, 100);
  CHECK(F.polys[0].to_string() != H.polys[0].to_string());
  CHECK_THROWS_AS(gen_banded_quadrics(8, 1, 0), std::invalid_argument);
}

TEST_CASE("mle: dimensions, groups, and the dropped equation degree") {
  for (auto [n, r] : std::vector<std::pair<int, int>>{{3, 2}, {4, 2}, {4, 3}, {5, 2}}) {
    const PolySystem F = gen_mle_symmetric(n, r, random_count_matrix(n, 17));
    const int expect = n * (n + 1) / 2;
    CHECK(F.size() == expect);
    CHECK(F.ring->nvars() == expect);
    CHECK(F.ring->ngroups() == 3);
    // Group sizes r(r+1)/2, (n-r)r, (n-r)(n-r+1)/2.
    CHECK(static_cast<int>(F.ring->group(0).size()) == r * (r + 1) / 2);
    CHECK(static_cast<int>(F.ring->group(1).size()) == (n - r) * r);
    CHECK(static_cast<int>(F.ring->group(2).size()) == (n - r) * (n - r + 1) / 2);

    const PolySystem Fh = homogenize_system(F);
    CHECK(Fh.polys[mle_dropped_equation_index(n)].multidegree() ==
          std::vector<int>{1, 2, 1});
  }
  CHECK_THROWS_AS(gen_mle_symmetric(3, 0, random_count_matrix(3, 1)),
                  std::invalid_argument);
}

TEST_CASE("mle: full-rank case collapses to a linear system with one solution") {
  for (int n : {3, 4}) {
    const PolySystem F = gen_mle_symmetric(n, n, random_count_matrix(n, 23));
    CHECK(F.ring->ngroups() == 1);
    for (const auto& f : F.polys) CHECK(f.total_degree() == 1);
    const BenchReport rep = run_direct_solve(F, fast(23));
    CHECK(rep.distinct_solutions == 1);
  }
}

TEST_CASE("mle: U validation") {
  auto U = random_count_matrix(3, 5);
  U[0][1] = U[1][0] + 1;
  CHECK_THROWS_AS(gen_mle_symmetric(3, 2, U), std::invalid_argument);
  auto Z = random_count_matrix(3, 5);
  Z[1][1] = 0;
  CHECK_THROWS_AS(gen_mle_symmetric(3, 2, Z), std::invalid_argument);
}

TEST_CASE("generators: symbolic vs numeric agreement on random points") {
  // Guards the index folding: evaluate each generated equation numerically at
  // random points against an independently coded recurrence.
  Rng rng(31);
  const int n = 6;
  const PolySystem F = gen_katsura(n);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd x = random_point(n + 1, rng);
    auto xat = [&](int i) { return std::abs(i) <= n ? x[std::abs(i)] : Cx(0.0); };
    // Linear relation.
    Cx lin = -1.0;
    for (int i = -n; i <= n; ++i) lin += xat(i);
    CHECK(std::abs(F.polys[0].evaluate(x) - lin) < 1e-12);
    // Convolutions for a couple of m values.
    for (int m : {0, 1, n - 1}) {
      Cx conv = -xat(m);
      for (int l = -n; l <= n; ++l) conv += xat(l) * xat(m - l);
      CHECK(std::abs(F.polys[m + 1].evaluate(x) - conv) < 1e-12);
    }
  }

  const PolySystem C = gen_cyclic(6);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXcd x = random_point(6, rng);
    for (int m = 1; m < 6; ++m) {
      Cx want(0.0);
      for (int i = 0; i < 6; ++i) {
        Cx prod(1.0);
        for (int j = 0; j < m; ++j) prod *= x[(i + j) % 6];
        want += prod;
      }
      CHECK(std::abs(C.polys[m - 1].evaluate(x) - want) < 1e-12);
    }
    Cx all(1.0);
    for (int i = 0; i < 6; ++i) all *= x[i];
    CHECK(std::abs(C.polys[5].evaluate(x) - (all - 1.0)) < 1e-12);
  }
}
