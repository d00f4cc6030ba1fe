#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "ugen/io.hpp"
#include "ugen/systems.hpp"

using namespace ugen;
using namespace ugen::testing;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("system json: round trip preserves ring and equations") {
  const PolySystem F = gen_katsura(3);
  const std::string text = system_to_json(F);
  const PolySystem G = system_from_json(text);
  CHECK(G.ring->same_structure(*F.ring));
  REQUIRE(G.size() == F.size());
  for (int i = 0; i < F.size(); ++i) CHECK(G.polys[i] == F.polys[i]);

  // Multi-group systems carry their group structure through.
  const PolySystem M = gen_mle_symmetric(3, 2, random_count_matrix(3, 4));
  const PolySystem M2 = system_from_json(system_to_json(M));
  CHECK(M2.ring->ngroups() == 3);
  for (int i = 0; i < M.size(); ++i) CHECK(M2.polys[i] == M.polys[i]);
}

TEST_CASE("system json: serialization is deterministic") {
  const PolySystem F = gen_banded_quadrics(6, 2, 42);
  CHECK(system_to_json(F) == system_to_json(F));
}

TEST_CASE("solutions json: round trip is bit exact") {
  Rng rng(8);
  std::vector<SolutionEntry> sols;
  for (int i = 0; i < 5; ++i) {
    SolutionEntry e;
    e.status = "Success";
    Eigen::VectorXcd a(3), b(2);
    for (int j = 0; j < 3; ++j) a[j] = rng.gauss_complex();
    for (int j = 0; j < 2; ++j) b[j] = rng.gauss_complex();
    e.point.factors = {a, b};
    sols.push_back(std::move(e));
  }
  const std::string text = solutions_to_json(sols);
  const auto back = solutions_from_json(text);
  REQUIRE(back.size() == sols.size());
  for (size_t i = 0; i < sols.size(); ++i) {
    CHECK(back[i].status == sols[i].status);
    REQUIRE(back[i].point.nfactors() == 2);
    for (int f = 0; f < 2; ++f)
      for (int c = 0; c < sols[i].point.factors[f].size(); ++c) {
        CHECK(back[i].point.factors[f][c].real() ==
              sols[i].point.factors[f][c].real());
        CHECK(back[i].point.factors[f][c].imag() ==
              sols[i].point.factors[f][c].imag());
      }
  }
}

TEST_CASE("atomic write: no leftover temporary file and content matches") {
  const std::string path = temp_path("ugen_io_test.json");
  atomic_write_file(path, "hello\n");
  CHECK(read_file(path) == "hello\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  atomic_write_file(path, "replaced\n");
  CHECK(read_file(path) == "replaced\n");
  std::filesystem::remove(path);
}
