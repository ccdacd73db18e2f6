#include <doctest.h>

#include <cmath>
#include <random>

#include "fisher/oracle.hpp"
#include "helpers.hpp"

using namespace fisher;

TEST_CASE("matching counts of small unit graphs") {
  // 1x1 torus: one or three connectors, the rest closed by triangle sides.
  auto t = oracle::enumerate_matchings(build_torus_fisher(1, 1));
  CHECK(t.matchings.size() == 4);
  CHECK(t.sector_totals[0][0] == 1);
  CHECK(t.sector_totals[1][0] == 1);
  CHECK(t.sector_totals[0][1] == 1);
  CHECK(t.sector_totals[1][1] == 1);
  // 1x1 cylinder: the c edge is gone, so a or b alone.
  auto c = oracle::enumerate_matchings(build_cylinder_fisher(1, 1));
  CHECK(c.matchings.size() == 2);
  for (const auto& m : c.matchings) CHECK(m.size() == 3);
}

TEST_CASE("every matching covers every vertex once") {
  std::mt19937_64 rng(41);
  FisherGraph g = th::random_graph(2, 2, Topology::Torus, rng);
  auto ml = oracle::enumerate_matchings(g);
  double sum = 0.0;
  for (std::size_t k = 0; k < ml.matchings.size(); ++k) {
    std::vector<int> cover(static_cast<std::size_t>(g.num_vertices()), 0);
    for (int e : ml.matchings[k]) {
      ++cover[static_cast<std::size_t>(g.edge(e).u)];
      ++cover[static_cast<std::size_t>(g.edge(e).v)];
    }
    for (int x : cover) CHECK(x == 1);
    sum += ml.weights[k];
  }
  CHECK(sum == doctest::Approx(ml.total));
  double sec = 0.0;
  for (auto& r : ml.sector_totals)
    for (double v : r) sec += v;
  CHECK(sec == doctest::Approx(ml.total));
}

TEST_CASE("exact determinant reproduces the two-cell factorization") {
  FisherGraph g = th::two_cell(2, 3, 5, 7);
  auto p = oracle::symbolic_charpoly_exact(g, canonical_orientation(g));
  CHECK(p.size() == 3);
  CHECK(p.at({1, 0}) == -210);
  CHECK(p.at({0, 0}) == 1261);
  CHECK(p.at({-1, 0}) == -210);
}

TEST_CASE("exact charpoly is symmetric under inversion") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> k(1, 16);
  FisherGraph g = th::random_graph(2, 1, Topology::Torus, rng, [&](auto& r) { return k(r) / 8.0; });
  auto p = oracle::symbolic_charpoly_exact(g, canonical_orientation(g));
  for (const auto& [mono, v] : p) {
    auto it = p.find({-mono.first, -mono.second});
    REQUIRE(it != p.end());
    CHECK(it->second == v);
    CHECK(in_newton_hexagon(mono.first, mono.second, 1, 2));
  }
}

TEST_CASE("size caps") {
  CHECK_THROWS(oracle::symbolic_charpoly_small(build_torus_fisher(2, 2), orient_periodic(build_torus_fisher(2, 2))));
  CHECK_THROWS(oracle::enumerate_matchings(build_torus_fisher(3, 3)));
  CHECK_THROWS(oracle::enumerate_spins(IsingSpec::uniform(5, 5)));
}

TEST_CASE("verify suite passes on small graphs") {
  std::mt19937_64 rng(43);
  for (Topology t : {Topology::Torus, Topology::Cylinder})
    for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {1, 2}}) {
      auto r = oracle::verify(th::random_graph(m, n, t, rng));
      CHECK(r.all_ok());
      CHECK(r.checks.size() >= 2);
    }
}

TEST_CASE("uniform critical beta is stable under enlargement") {
  CHECK(oracle::uniform_critical_beta(2, 2) == doctest::Approx(oracle::uniform_critical_beta(1, 1)).epsilon(1e-12));
  CHECK(oracle::uniform_critical_beta(1, 1, 2.0) == doctest::Approx(std::log(3.0) / 8.0).epsilon(1e-12));
}
