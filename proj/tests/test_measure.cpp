#include <doctest.h>

#include <cmath>
#include <random>

#include "fisher/charpoly.hpp"
#include "fisher/kasteleyn.hpp"
#include "fisher/measure.hpp"
#include "fisher/spectral.hpp"
#include "helpers.hpp"

using namespace fisher;

TEST_CASE("edge references") {
  EdgeRef e = parse_edge_ref("b:-3:1");
  CHECK(e.kind == EdgeKind::B);
  CHECK(e.x == -3);
  CHECK(e.y == 1);
  CHECK(to_string(parse_edge_ref("T:4:0:5")) == "T:4:0:5");
  CHECK_THROWS(parse_edge_ref("T:4:0"));
  CHECK_THROWS(parse_edge_ref("q:1:1"));
  CHECK_THROWS(parse_edge_ref("a:x:1"));
  FisherGraph g = th::two_cell(1, 1, 1, 1);
  // b at the last column crosses into the next fundamental domain.
  auto [u, v] = endpoints(g, parse_edge_ref("b:-1:0"));
  CHECK(u.k == -1);
  CHECK(v.k == 0);
}

TEST_CASE("two-cell cylinder: frozen, empty and critical a1 probabilities") {
  const EdgeRef a1{EdgeKind::A, 0, 0, 0};
  struct Case {
    double a1, a2, b1, b2, expect;
  };
  for (Case c : {Case{2, 3, 1, 1.5, 1.0}, Case{1, 1.5, 2, 3, 0.0}, Case{2, 3, 1.5, 4, 0.5}, Case{0.7, 1.1, 1.4, 0.55, 0.5}}) {
    FisherGraph g = th::two_cell(c.a1, c.a2, c.b1, c.b2);
    CHECK(cylinder_set_probability(g, canonical_orientation(g), {a1}) == doctest::Approx(c.expect).epsilon(1e-9));
  }
}

TEST_CASE("limit entries agree with finite Fourier sums and with a long cylinder") {
  std::mt19937_64 rng(21);
  FisherGraph g = th::random_graph(2, 2, Topology::Cylinder, rng);
  Orientation o = canonical_orientation(g);
  auto [v, w] = endpoints(g, EdgeRef{EdgeKind::B, 1, 0, 0});
  const CylVertex far{v.k + 3, w.s};
  InvKEntry lim = inv_k_limit(g, o, v, far);
  CHECK_FALSE(lim.pv_corrected);
  CHECK(std::abs(lim.value.imag()) < 1e-12);
  double prev = 1.0;
  for (int l : {4, 8, 16, 32}) {
    double gap = std::abs(finite_inverse_entry(g, o, l, v, far) - lim.value);
    CHECK(gap <= prev + 1e-15);
    prev = gap;
  }
  CHECK(prev < 1e-10);

  // One edge on the infinite cylinder against the same edge on a 2l-fold cover.
  FisherGraph big = enlarge_domain(g, 64, 1);
  Orientation ob = lift_orientation(g, o, big);
  const int e = big.find_edge(EdgeKind::C, 1, 0);
  double finite = edge_probability_cylinder(big, ob, {e});
  double limit = cylinder_set_probability(g, o, {EdgeRef{EdgeKind::C, 1, 0, 0}});
  CHECK(finite == doctest::Approx(limit).epsilon(1e-8));
}

TEST_CASE("critical limit keeps the principal-value correction") {
  FisherGraph g = th::two_cell(2, 3, 1.5, 4);
  Orientation o = canonical_orientation(g);
  InverseKernel k(g, o, {0, 3}, 4);
  CHECK(k.has_node());
  CHECK(k.node() == 1);
  InvKEntry e = k.entry(0, 0, 3);
  CHECK(e.pv_corrected);
  CHECK(std::abs(e.residue_term) > 1e-3);
  // Symmetric Fourier sums converge to the principal value.
  auto [u, v] = endpoints(g, EdgeRef{EdgeKind::A, 0, 0, 0});
  for (long shift : {0L, 2L, -3L}) {
    CylVertex w{v.k + shift, v.s};
    CHECK(std::abs(finite_inverse_entry(g, o, 256, u, w) - inv_k_limit(g, o, u, w).value) < 1e-3);
  }
}

TEST_CASE("covariance: Pfaffian route equals the entrywise display") {
  std::mt19937_64 rng(22);
  FisherGraph g = th::random_graph(2, 2, Topology::Cylinder, rng);
  Orientation o = canonical_orientation(g);
  Covariance c = covariance(g, o, EdgeRef{EdgeKind::A, 0, 1, 0}, EdgeRef{EdgeKind::B, 3, 0, 0});
  CHECK(c.value == doctest::Approx(c.display).epsilon(1e-9));
  CHECK(c.joint >= 0);
  CHECK(c.joint <= std::min(c.p1, c.p2) + 1e-12);
}

TEST_CASE("joint probability on the cylinder against a long finite cylinder") {
  std::mt19937_64 rng(23);
  // Near-critical draws have long correlation lengths and converge slowly.
  FisherGraph g;
  do {
    g = th::random_graph(1, 2, Topology::Cylinder, rng);
  } while (scan_unit_circle(charpoly_cylinder(g, canonical_orientation(g)), 256).min_value <
           0.1 * charpoly_cylinder(g, canonical_orientation(g)).max_abs());
  Orientation o = canonical_orientation(g);
  std::vector<EdgeRef> es{{EdgeKind::A, 0, 0, 0}, {EdgeKind::C, 2, 0, 0}};
  double limit = cylinder_set_probability(g, o, es);
  FisherGraph big = enlarge_domain(g, 64, 1);
  double finite = edge_probability_cylinder(big, lift_orientation(g, o, big),
                                            {big.find_edge(EdgeKind::A, 0, 0), big.find_edge(EdgeKind::C, 2, 0)});
  CHECK(finite == doctest::Approx(limit).epsilon(1e-8));
  CHECK_THROWS(cylinder_set_probability(g, o, {es[0], es[0]}));
}

TEST_CASE("decay classification") {
  CorrelationCurve c;
  for (int d = 1; d <= 12; ++d) {
    c.distances.push_back(d);
    c.covariances.push_back(0.3 * std::exp(-0.7 * d));
  }
  classify_decay(c);
  CHECK(c.classification == Decay::Exponential);
  CHECK(c.rate == doctest::Approx(-0.7).epsilon(1e-9));

  for (auto& v : c.covariances) v = -0.25;
  classify_decay(c);
  CHECK(c.classification == Decay::Constant);
  CHECK(c.plateau == doctest::Approx(-0.25));

  for (std::size_t i = 0; i < c.covariances.size(); ++i) c.covariances[i] = 0.1 / (1.0 + i);
  classify_decay(c);
  CHECK(c.classification == Decay::Undetermined);

  c.covariances.resize(5);
  c.distances.resize(5);
  CHECK_THROWS(classify_decay(c));
}

TEST_CASE("noncritical covariances decay, critical ones plateau") {
  std::mt19937_64 rng(24);
  FisherGraph off = th::random_graph(2, 2, Topology::Cylinder, rng);
  CorrelationCurve c = correlation_curve(off, canonical_orientation(off), EdgeRef{EdgeKind::A, 0, 0, 0},
                                         EdgeRef{EdgeKind::A, 0, 1, 0}, 12);
  CHECK(c.classification == Decay::Exponential);

  FisherGraph on = th::two_cell(2, 3, 1.5, 4);
  CorrelationCurve k = correlation_curve(on, canonical_orientation(on), EdgeRef{EdgeKind::A, 0, 0, 0},
                                         EdgeRef{EdgeKind::B, 1, 0, 0}, 20);
  CHECK(k.classification == Decay::Constant);
  CHECK(k.covariances.back() == doctest::Approx(-0.25).epsilon(1e-6));
}

TEST_CASE("free energy and its Riemann sums") {
  std::mt19937_64 rng(25);
  FisherGraph g = th::random_graph(2, 1, Topology::Cylinder, rng);
  Orientation o = canonical_orientation(g);
  FreeEnergy f = free_energy_cylinder(charpoly_cylinder(g, o));
  REQUIRE(f.riemann.size() == 4);
  CHECK(std::abs(f.riemann.back().second - f.value) < 1e-8);
  // (1/4l) log Z^2 of the 2l-fold cylinder is the same Riemann sum.
  FisherGraph big = enlarge_domain(g, 8, 1);
  double Z = partition_function_cylinder(big, lift_orientation(g, o, big));
  CHECK(f.riemann[1].second == doctest::Approx(std::log(Z * Z) / 16.0).epsilon(1e-10));
}
