#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "fisher/charpoly.hpp"
#include "fisher/io.hpp"
#include "fisher/ising.hpp"
#include "fisher/oracle.hpp"
#include "helpers.hpp"

using namespace fisher;

TEST_CASE("connector weights are exp(2 beta J)") {
  FisherGraph g = to_fisher_graph(IsingSpec::uniform(2, 2, 1.0, 0.2));
  for (const Edge& e : g.edges()) CHECK(e.weight == doctest::Approx(e.kind == EdgeKind::Triangle ? 1.0 : std::exp(0.4)));
  FisherGraph h = to_fisher_graph(IsingSpec::uniform(2, 2, 1.0, 1e-9));
  for (const Edge& e : h.edges()) CHECK(e.weight >= 1.0);
  CHECK_THROWS(to_fisher_graph(IsingSpec::uniform(1, 2)));
  CHECK_NOTHROW(to_fisher_graph(IsingSpec::uniform(1, 2), false));
  IsingSpec bad = IsingSpec::uniform(2, 2);
  bad.set_coupling(0, 0, 1, -1.0);
  CHECK_THROWS(bad.validate());
}

TEST_CASE("bond to connector map") {
  const int m = 3, n = 2;
  FisherGraph g = build_torus_fisher(m, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < m; ++x) {
      const int me = y * m + x;
      const int nb[3] = {y * m + (x + 1) % m, ((y + 1) % n) * m + x, ((y + 1) % n) * m + (x + m - 1) % m};
      for (int d = 0; d < 3; ++d) {
        WeightKey k = connector_of_bond(m, n, x, y, d);
        auto [s, t] = spins_across(g, g.find_edge(k.kind, k.x, k.y));
        CHECK(((s == me && t == nb[d]) || (t == me && s == nb[d])));
      }
    }
}

TEST_CASE("Ising partition function is 2 prod exp(-beta J) Z_{F,D00}") {
  IsingSpec s = IsingSpec::uniform(2, 2, 1.0, 0.3);
  s.set_coupling(1, 0, 2, 0.6);
  s.set_coupling(0, 1, 0, 1.7);
  auto e = oracle::enumerate_spins(s);
  CHECK(ising_partition_from_dimers(s) == doctest::Approx(e.Z_ising).epsilon(1e-12));
  double pre = 0.0;
  for (double J : s.J) pre += s.beta * J;
  CHECK(e.Z_ising == doctest::Approx(2.0 * std::exp(-pre) * e.image_sector_totals[0][0]).epsilon(1e-12));
  // The other prefactor, 2 prod exp(+beta J), is off by exp(2 beta sum J).
  CHECK(std::abs(e.Z_ising - 2.0 * std::exp(pre) * e.image_sector_totals[0][0]) > 1.0);
}

TEST_CASE("spin to dimer map is two-to-one onto D00") {
  IsingSpec s = IsingSpec::uniform(2, 2, 1.0, 0.3);
  auto e = oracle::enumerate_spins(s);
  CHECK(e.all_matchings);
  CHECK(e.two_to_one);
  CHECK(e.distinct_images == 8);
  FisherGraph g = to_fisher_graph(s);
  auto ml = oracle::enumerate_matchings(g);
  long d00 = 0;
  for (const auto& sec : ml.sectors) d00 += sec[0] == 0 && sec[1] == 0;
  CHECK(d00 == e.distinct_images);
  CHECK(e.image_sector_totals[0][0] == doctest::Approx(ml.sector_totals[0][0]).epsilon(1e-12));
}

TEST_CASE("generalized correspondence with light edges") {
  // Weights below 1 flip the occupation rule; keep them even at triangles.
  WeightMap w;
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x) {
      w[{EdgeKind::A, x, y, 0}] = 1.5;
      w[{EdgeKind::B, x, y, 0}] = 0.5;
      w[{EdgeKind::C, x, y, 0}] = 0.4;
    }
  FisherGraph g = build_torus_fisher(2, 2, w);
  std::set<std::vector<bool>> images;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<int> s(4);
    for (int i = 0; i < 4; ++i) s[static_cast<std::size_t>(i)] = (mask >> i & 1) ? -1 : 1;
    auto d = dimers_from_spins(g, s);
    REQUIRE(d);
    images.insert(*d);
  }
  CHECK(images.size() == 8);
}

TEST_CASE("critical beta of the uniform model") {
  const double exact = std::log(3.0) / 4.0;
  for (int s : {1, 2}) {
    CriticalResult r = critical_beta(IsingSpec::uniform(s, s), 0.05, 1.0);
    CHECK(std::abs(r.beta - exact) < 1e-10);
    CHECK(r.validated);
  }
  CHECK(std::abs(oracle::uniform_critical_beta(1, 1) - exact) < 1e-12);
  CHECK_THROWS(critical_beta(IsingSpec::uniform(2, 2), 0.5, 1.0));
}

TEST_CASE("anisotropic couplings pass the node check") {
  IsingSpec s = io::couplings_from_json(io::read_json(th::fixture("aniso2x2_couplings.json")));
  CriticalResult r = critical_beta(s, 0.05, 1.0);
  CHECK(r.validated);
  CHECK(r.at_critical.verdict == "single-real");
}

TEST_CASE("duality report: positivity below and at criticality") {
  FisherGraph sub = to_fisher_graph(IsingSpec::uniform(2, 2, 1.0, 0.5));
  DualityReport d = duality_report(sub, canonical_orientation(sub));
  CHECK(d.positivity_ok);
  CHECK(d.z00_max);
  CHECK(d.consistent);
  auto ml = oracle::enumerate_matchings(sub);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(d.sectors[a][b] == doctest::Approx(ml.sector_totals[a][b]).epsilon(1e-10));

  FisherGraph crit = to_fisher_graph(IsingSpec::uniform(2, 2, 1.0, std::log(3.0) / 4.0));
  DualityReport c = duality_report(crit, canonical_orientation(crit));
  CHECK(std::abs(c.pf[0][0]) < 1e-9 * c.pf[1][1]);
  CHECK(c.positivity_ok);
}

TEST_CASE("positivity on the torus and on the w = -1 slice") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  for (int k = 0; k < 3; ++k) {
    WeightMap w;
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 2; ++x) {
        w[{EdgeKind::B, x, y, 0}] = U(rng);
        w[{EdgeKind::C, x, y, 0}] = U(rng);
      }
    ParityNormalization pn = normalize_weight_parity(build_torus_fisher(2, 2, w));
    LaurentPoly2 p = charpoly_torus(pn.graph, canonical_orientation(pn.graph));
    PositivityReport r = positivity_check(p, 64);
    CHECK(r.ok);
    CHECK(slice_min_w(p, -1, 128).min_value > 0);
  }
  // A polynomial that dips below zero is caught with a witness.
  LaurentPoly2 q(1, 0);
  q.set(0, 0, 1.0);
  q.set(1, 0, 1.0);
  q.set(-1, 0, 1.0);
  PositivityReport bad = positivity_check(q, 16);
  CHECK_FALSE(bad.ok);
  CHECK(bad.min_value == doctest::Approx(-1.0).epsilon(1e-9));
}
