#include <doctest.h>

#include <cmath>
#include <random>

#include "fisher/charpoly.hpp"
#include "fisher/oracle.hpp"
#include "helpers.hpp"

using namespace fisher;

TEST_CASE("two-cell cylinder polynomial factorizes") {
  FisherGraph g = th::two_cell(2, 3, 5, 7);
  LaurentPoly1 p = charpoly_cylinder(g, canonical_orientation(g));
  CHECK(p.bound() == 1);
  CHECK(p.coeff(-1) == doctest::Approx(-210.0));
  CHECK(p.coeff(0) == doctest::Approx(1261.0));
  CHECK(p.coeff(1) == doctest::Approx(-210.0));
}

TEST_CASE("unit 1x1 torus has constant P") {
  FisherGraph g = build_torus_fisher(1, 1);
  LaurentPoly2 p = charpoly_torus(g, canonical_orientation(g));
  LaurentPoly2 e = oracle::symbolic_charpoly_small(g, canonical_orientation(g));
  CHECK(p.terms().size() == e.terms().size());
  for (const auto& t : e.terms()) CHECK(p.coeff(t.i, t.j) == doctest::Approx(t.c));
}

TEST_CASE("support lies in the Newton hexagon and is symmetric") {
  std::mt19937_64 rng(7);
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {2, 2}, {3, 2}}) {
    FisherGraph g = th::random_graph(m, n, Topology::Torus, rng);
    LaurentPoly2 p = charpoly_torus(g, canonical_orientation(g));
    const int I = z_degree_bound(g), J = w_degree_bound(g);
    for (const auto& t : p.terms()) {
      CHECK(in_newton_hexagon(t.i, t.j, I, J));
      CHECK(p.coeff(-t.i, -t.j) == doctest::Approx(t.c).epsilon(1e-9));
    }
  }
}

TEST_CASE("interpolation agrees with the exact determinant") {
  std::mt19937_64 rng(8);
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {1, 2}}) {
    FisherGraph g = th::random_graph(m, n, Topology::Torus, rng);
    Orientation o = canonical_orientation(g);
    LaurentPoly2 p = charpoly_torus(g, o), e = oracle::symbolic_charpoly_small(g, o);
    const double s = e.max_abs();
    for (int i = -3; i <= 3; ++i)
      for (int j = -3; j <= 3; ++j) CHECK(std::abs(p.coeff(i, j) - e.coeff(i, j)) <= 1e-9 * s);
  }
}

TEST_CASE("enlargement product formula") {
  std::mt19937_64 rng(9);
  FisherGraph g = th::random_graph(1, 1, Topology::Torus, rng);
  Orientation o = canonical_orientation(g);
  FisherGraph big = enlarge_domain(g, 2, 2);
  LaurentPoly2 p1 = charpoly_torus(g, o), p2 = charpoly_torus(big, canonical_orientation(big));
  EnlargementReport r = verify_enlargement(p1, p2, 2, 2, 25, 17);
  CHECK(r.ok);
  CHECK(r.max_rel_err <= 1e-8);

  FisherGraph c = th::random_graph(2, 2, Topology::Cylinder, rng);
  FisherGraph c3 = enlarge_domain(c, 3, 1);
  EnlargementReport rc = verify_enlargement(charpoly_cylinder(c, canonical_orientation(c)),
                                            charpoly_cylinder(c3, canonical_orientation(c3)), 3, 25, 18);
  CHECK(rc.ok);

  // A wrong pairing fails and names a witness.
  EnlargementReport bad = verify_enlargement(p1, p1, 2, 2, 5, 19);
  CHECK_FALSE(bad.ok);
  CHECK(std::abs(std::abs(bad.z_witness) - 1.0) < 1e-12);
}

TEST_CASE("transfer-sum closed form matches the block graph") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> U(0.3, 2.0);
  for (int nb = 1; nb <= 4; ++nb) {
    std::vector<TransferBlock> blocks(static_cast<std::size_t>(nb));
    for (auto& b : blocks) b = {U(rng), U(rng), U(rng), U(rng), U(rng), U(rng)};
    LaurentPoly2 closed = transfer_sum_poly(blocks);
    FisherGraph g = transfer_block_graph(blocks);
    LaurentPoly2 p = charpoly_torus(g, canonical_orientation(g));
    const double sz = nb % 2 ? -1.0 : 1.0;  // (-1)^n
    for (int k = 0; k < 6; ++k) {
      cplx z = std::polar(1.0, 0.37 + k), w = std::polar(1.0, -1.1 + 0.5 * k);
      cplx a = closed(z, w), b = p(sz * z, -w);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, closed.max_abs()));
    }
  }
}

TEST_CASE("interpolation residual guard fires on a too-small tolerance") {
  std::mt19937_64 rng(12);
  FisherGraph g = th::random_graph(2, 2, Topology::Torus, rng);
  CHECK_THROWS_AS(charpoly_torus(g, canonical_orientation(g), 1e-30), InterpolationError);
}
