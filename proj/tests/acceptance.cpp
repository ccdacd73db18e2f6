// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "fisher/charpoly.hpp"
#include "fisher/ising.hpp"
#include "fisher/kasteleyn.hpp"
#include "fisher/measure.hpp"
#include "fisher/oracle.hpp"
#include "fisher/spectral.hpp"

using namespace fisher;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
};

FisherGraph two_cell(double a1, double a2, double b1, double b2) {
  WeightMap w;
  w[{EdgeKind::A, 0, 0, 0}] = a1;
  w[{EdgeKind::A, 1, 0, 0}] = a2;
  w[{EdgeKind::B, 0, 0, 0}] = b1;
  w[{EdgeKind::B, 1, 0, 0}] = b2;
  return build_cylinder_fisher(2, 1, w);
}

FisherGraph random_graph(int m, int n, Topology t, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.3, 2.5);
  FisherGraph g0 = t == Topology::Torus ? build_torus_fisher(m, n) : build_cylinder_fisher(m, n);
  WeightMap w;
  for (const Edge& e : g0.edges()) w[{e.kind, e.cell_x, e.cell_y, e.side}] = U(rng);
  return t == Topology::Torus ? build_torus_fisher(m, n, w) : build_cylinder_fisher(m, n, w);
}

// Triangle and a weights 1, b and c in (0,1), then parity-normalized.
FisherGraph normalized_torus(int m, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.02, 0.98);
  WeightMap w;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < m; ++x) {
      w[{EdgeKind::B, x, y, 0}] = U(rng);
      w[{EdgeKind::C, x, y, 0}] = U(rng);
    }
  return normalize_weight_parity(build_torus_fisher(m, n, w)).graph;
}

double angle_to_real(double t) {
  t = std::remainder(t, 2 * std::numbers::pi);
  return std::min(std::abs(t), std::numbers::pi - std::abs(t));
}

template <class T>
std::string num(T v) {
  if constexpr (std::is_integral_v<T>) {
    return std::to_string(v);
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }
}

void fail(Outcome& o, const std::string& why) {
  if (o.ok) o.note = why;
  o.ok = false;
}

// ---------------------------------------------------------------------------

Outcome c1_two_cell_charpoly() {
  Outcome o;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> U(0.2, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double a1 = U(rng), a2 = U(rng), b1 = U(rng), b2 = U(rng);
    FisherGraph g = two_cell(a1, a2, b1, b2);
    LaurentPoly1 p = charpoly_cylinder(g, canonical_orientation(g));
    const double A = a1 * a2, B = b1 * b2;
    const double want[3] = {-A * B, A * A + B * B, -A * B};
    for (int i = -1; i <= 1; ++i) worst = std::max(worst, std::abs(p.coeff(i) - want[i + 1]) / std::abs(want[i + 1]));
    if (p.bound() > 1) fail(o, "degree too high");
  }
  if (worst > 1e-9) fail(o, "rel err " + num(worst));
  o.note = o.ok ? "max rel err " + num(worst) : o.note;
  return o;
}

Outcome c2_two_cell_measure() {
  Outcome o;
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> U(0.3, 3.0);
  const EdgeRef a1{EdgeKind::A, 0, 0, 0};
  double worst = 0.0;
  for (int k = 0; k < 12; ++k) {
    double w[4] = {U(rng), U(rng), U(rng), U(rng)};
    double expect = 0.5, tol = 1e-3;
    if (k % 3 == 2) {
      w[3] = w[0] * w[1] / w[2];  // b1 b2 = a1 a2
    } else {
      expect = w[0] * w[1] > w[2] * w[3] ? 1.0 : 0.0;
      tol = 1e-4;
    }
    FisherGraph g = two_cell(w[0], w[1], w[2], w[3]);
    const double p = cylinder_set_probability(g, canonical_orientation(g), {a1});
    worst = std::max(worst, std::abs(p - expect));
    if (std::abs(p - expect) > tol) fail(o, "Pr(a1) = " + num(p) + ", want " + num(expect));
  }
  for (auto [a1w, a2w, b1w, b2w] : {std::array<double, 4>{2, 3, 1.5, 4}, {0.7, 1.3, 0.65, 1.4}}) {
    FisherGraph g = two_cell(a1w, a2w, b1w, b2w);
    // a1 against b2 twenty fundamental domains away
    Covariance c = covariance(g, canonical_orientation(g), a1, EdgeRef{EdgeKind::B, 1 + 20 * 2, 0, 0});
    if (std::abs(c.value + 0.25) > 1e-3) fail(o, "critical cov(d=20) = " + num(c.value));
    o.note = "cov(d=20) = " + num(c.value);
  }
  o.note += ", max |dPr| " + num(worst);
  return o;
}

Outcome c3_oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(103);
  int graphs = 0;
  double worst_poly = 0.0, worst_z = 0.0;
  const std::vector<std::tuple<int, int, Topology>> shapes = {
      {1, 1, Topology::Torus}, {2, 1, Topology::Torus}, {1, 1, Topology::Cylinder}, {2, 1, Topology::Cylinder}, {1, 2, Topology::Cylinder}};
  for (auto [m, n, t] : shapes)
    for (int k = 0; k < 4; ++k) {
      FisherGraph g = random_graph(m, n, t, rng);
      Orientation or_ = canonical_orientation(g);
      LaurentPoly2 exact = oracle::symbolic_charpoly_small(g, or_);
      const double s = exact.max_abs();
      auto ml = oracle::enumerate_matchings(g);
      double z = 0.0;
      if (t == Topology::Torus) {
        LaurentPoly2 p = charpoly_torus(g, or_);
        for (int i = -4; i <= 4; ++i)
          for (int j = -4; j <= 4; ++j) worst_poly = std::max(worst_poly, std::abs(p.coeff(i, j) - exact.coeff(i, j)) / s);
        z = partition_function_torus(g, or_);
      } else {
        LaurentPoly1 p = charpoly_cylinder(g, or_);
        for (int i = -4; i <= 4; ++i) worst_poly = std::max(worst_poly, std::abs(p.coeff(i) - exact.coeff(i, 0)) / s);
        z = partition_function_cylinder(g, or_);
      }
      worst_z = std::max(worst_z, std::abs(z - ml.total) / ml.total);
      ++graphs;
    }
  // Exact mode: dyadic weights, det K at the four real points against the
  // squared signed sector sums, all in rationals.
  std::uniform_int_distribution<int> D(1, 24);
  int exact_checks = 0;
  for (auto [m, n, t] : shapes)
    for (int k = 0; k < 2; ++k) {
      FisherGraph g0 = t == Topology::Torus ? build_torus_fisher(m, n) : build_cylinder_fisher(m, n);
      WeightMap w;
      for (const Edge& e : g0.edges()) w[{e.kind, e.cell_x, e.cell_y, e.side}] = D(rng) / 8.0;
      FisherGraph g = t == Topology::Torus ? build_torus_fisher(m, n, w) : build_cylinder_fisher(m, n, w);
      oracle::ExactPoly P = oracle::symbolic_charpoly_exact(g, canonical_orientation(g));
      auto ml = oracle::enumerate_matchings(g);
      oracle::rational Z[2][2] = {{0, 0}, {0, 0}};
      for (std::size_t i = 0; i < ml.matchings.size(); ++i) {
        oracle::rational wt = 1;
        for (int e : ml.matchings[i]) wt *= oracle::rational(g.edge(e).weight);
        Z[ml.sectors[i][0]][ml.sectors[i][1]] += wt;
      }
      auto det_at = [&](int sz, int sw) {
        oracle::rational v = 0;
        for (const auto& [ij, c] : P) v += c * ((ij.first % 2 && sz < 0) ? -1 : 1) * ((ij.second % 2 && sw < 0) ? -1 : 1);
        return v;
      };
      if (t == Topology::Cylinder) {
        oracle::rational total = Z[0][0] + Z[1][0] + Z[0][1] + Z[1][1];
        if (det_at(-1, 1) != total * total) fail(o, "exact cylinder det K(-1) != Z^2");
        ++exact_checks;
        continue;
      }
      for (int th = 0; th < 2; ++th)
        for (int ta = 0; ta < 2; ++ta) {
          oracle::rational pf = 0;
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) pf += ((a + b + a * b + th * a + ta * b) % 2 ? -1 : 1) * Z[a][b];
          if (det_at(th ? -1 : 1, ta ? -1 : 1) != pf * pf) fail(o, "exact torus det != signed sector sum squared");
          ++exact_checks;
        }
    }
  if (worst_poly > 1e-9) fail(o, "charpoly mismatch " + num(worst_poly));
  if (worst_z > 1e-10) fail(o, "Z mismatch " + num(worst_z));
  if (o.ok) o.note = num(graphs) + " graphs (" + num(exact_checks) + " exact identities), poly err " + num(worst_poly) + ", Z err " + num(worst_z);
  return o;
}

Outcome c4_enlargement() {
  Outcome o;
  std::mt19937_64 rng(104);
  double worst = 0.0;
  for (auto [m, n, k, l] : {std::array<int, 4>{1, 1, 2, 2}, {2, 1, 2, 2}, {1, 2, 2, 1}, {1, 1, 3, 2}}) {
    FisherGraph g = random_graph(m, n, Topology::Torus, rng);
    FisherGraph big = enlarge_domain(g, k, l);
    LaurentPoly2 p1 = charpoly_torus(g, canonical_orientation(g));
    LaurentPoly2 p2 = charpoly_torus(big, canonical_orientation(big));
    EnlargementReport r = verify_enlargement(p1, p2, k, l, 25, rng());
    worst = std::max(worst, r.max_rel_err);
    if (!r.ok || r.max_rel_err > 1e-8) fail(o, "torus " + num(k) + "x" + num(l));
  }
  FisherGraph c = random_graph(2, 2, Topology::Cylinder, rng);
  FisherGraph c2 = enlarge_domain(c, 2, 1);
  EnlargementReport rc = verify_enlargement(charpoly_cylinder(c, canonical_orientation(c)),
                                            charpoly_cylinder(c2, canonical_orientation(c2)), 2, 25, rng());
  worst = std::max(worst, rc.max_rel_err);
  if (!rc.ok || rc.max_rel_err > 1e-8) fail(o, "cylinder x2");
  if (o.ok) o.note = "max rel err " + num(worst);
  return o;
}

Outcome c5_circle_zeros_real() {
  Outcome o;
  std::mt19937_64 rng(105);
  std::uniform_int_distribution<int> M(1, 3), H(1, 4);
  std::uniform_real_distribution<double> U(0.3, 3.0);
  int candidates = 0;
  for (int k = 0; k < 200; ++k) {
    FisherGraph g;
    if (k % 5 == 0) {
      const double a1 = U(rng), a2 = U(rng), b1 = U(rng);
      g = two_cell(a1, a2, b1, a1 * a2 / b1);
    } else {
      g = random_graph(M(rng), H(rng), Topology::Cylinder, rng);
    }
    LaurentPoly1 p = charpoly_cylinder(g, canonical_orientation(g));
    SpectralReport r = scan_unit_circle(p, std::max(256, 32 * p.bound()));
    for (const auto* list : {&r.zeros, &r.suspicious})
      for (const auto& z : *list) {
        ++candidates;
        if (angle_to_real(z[0]) > 1e-6) fail(o, "non-real zero at theta=" + num(z[0]));
      }
    if (r.verdict == "violation") fail(o, "violation verdict on draw " + num(k));
  }
  if (o.ok) o.note = num(candidates) + " candidates, all real";
  return o;
}

Outcome c6_eigen_split() {
  Outcome o;
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> T(1e-3, std::numbers::pi - 1e-3);
  std::vector<FisherGraph> graphs;
  graphs.push_back(two_cell(2, 3, 1.5, 4));
  for (auto [m, h] : {std::pair{1, 1}, {2, 1}, {1, 2}, {2, 2}, {3, 1}, {3, 2}, {2, 3}, {3, 3}, {1, 4}})
    graphs.push_back(random_graph(m, h, Topology::Cylinder, rng));
  int total = 0;
  for (const FisherGraph& g : graphs) {
    KasteleynOperator K = assemble(g, canonical_orientation(g));
    for (int k = 0; k < 50; ++k) {
      const double t = (k % 2 ? -1.0 : 1.0) * T(rng);
      EigenSplit s = eigen_split(K, std::polar(1.0, t));
      if (s.zero != 0 || s.pos != s.neg) fail(o, "split " + num(s.pos) + "/" + num(s.neg));
      ++total;
    }
  }
  if (o.ok) o.note = num(total) + " points on " + num(graphs.size()) + " graphs";
  return o;
}

Outcome c7_jensen_jump() {
  Outcome o;
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> U(0.3, 3.0);
  double off = 0.0, on_err = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double a1 = U(rng), a2 = U(rng), b1 = U(rng);
    double b2 = U(rng);
    if (std::abs(a1 * a2 - b1 * b2) < 0.05 * a1 * a2) b2 *= 1.5;
    FisherGraph g = two_cell(a1, a2, b1, b2);
    off = std::max(off, std::abs(jensen_profile(charpoly_cylinder(g, canonical_orientation(g)), {}).jump));
    FisherGraph c = two_cell(a1, a2, b1, a1 * a2 / b1);
    on_err = std::max(on_err, std::abs(jensen_profile(charpoly_cylinder(c, canonical_orientation(c)), {}).jump - 2.0));
  }
  if (off > 1e-6) fail(o, "noncritical jump " + num(off));
  if (on_err > 1e-2) fail(o, "critical jump off by " + num(on_err));
  if (o.ok) o.note = "noncritical max " + num(off) + ", critical err " + num(on_err);
  return o;
}

Outcome c8_positivity() {
  Outcome o;
  std::mt19937_64 rng(108);
  double worst_ratio = 1.0, worst_slice = 1e300;
  for (int k = 0; k < 20; ++k) {
    const int m = k % 3 == 1 ? 4 : 2, n = k % 3 == 2 ? 4 : 2;
    FisherGraph g = normalized_torus(m, n, rng);
    LaurentPoly2 p = charpoly_torus(g, canonical_orientation(g));
    PositivityReport r = positivity_check(p, 96);
    worst_ratio = std::min(worst_ratio, r.min_value / r.max_abs);
    if (!r.ok) fail(o, "min P " + num(r.min_value));
    SliceMin s = slice_min_w(p, -1, 256);
    worst_slice = std::min(worst_slice, s.min_value / p.max_abs());
    if (!(s.min_value > 0)) fail(o, "P(z,-1) min " + num(s.min_value));
  }
  if (o.ok) o.note = "min P/max " + num(worst_ratio) + ", min P(z,-1)/max " + num(worst_slice);
  return o;
}

Outcome c9_harnack() {
  Outcome o;
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> B(0.2, 0.6);
  int worst = 0;
  for (int k = 0; k < 10; ++k) {
    FisherGraph g;
    if (k < 6) {
      g = normalized_torus(2, k % 2 ? 4 : 2, rng);
    } else {
      IsingSpec s = IsingSpec::uniform(2, 2, 1.0, B(rng));
      for (double& J : s.J) J = 0.5 + std::uniform_real_distribution<double>(0, 1.5)(rng);
      g = to_fisher_graph(s);
    }
    LaurentPoly2 p = charpoly_torus(g, canonical_orientation(g));
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        const double x = 0.5 + 1.5 * i / 4.0, y = 0.5 + 1.5 * j / 4.0;
        const int c = harnack_count(p, x, y, 64);
        worst = std::max(worst, c);
        if (c > 2) fail(o, "count " + num(c) + " at (" + num(x) + "," + num(y) + ")");
      }
  }
  if (o.ok) o.note = "max count " + num(worst);
  return o;
}

Outcome c10_ising() {
  Outcome o;
  CriticalResult r = critical_beta(IsingSpec::uniform(1, 1), 0.05, 1.0);
  const double ref = oracle::uniform_critical_beta(1, 1);
  if (std::abs(r.beta - ref) > 1e-8) fail(o, "beta_c " + num(r.beta) + " vs oracle " + num(ref));
  if (r.at_critical.verdict != "single-real") fail(o, "no single real node at beta_c");
  if (r.below.verdict != "empty" || r.above.verdict != "empty") fail(o, "nonempty scan at beta_c +- 0.05");
  CriticalResult r2 = critical_beta(IsingSpec::uniform(2, 2), 0.05, 1.0);
  if (std::abs(r2.beta - ref) > 1e-8 || !r2.validated) fail(o, "2x2 beta_c disagrees");
  auto e = oracle::enumerate_spins(IsingSpec::uniform(2, 2, 1.0, 0.3));
  if (!e.two_to_one || !e.all_matchings) fail(o, "spin -> dimer map not 2-to-1");
  if (o.ok) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "beta_c %.15g (oracle %.15g), node at %s, %ld configurations -> %ld matchings", r.beta,
                  ref, r.at_critical.location.c_str(), e.configurations, e.distinct_images);
    o.note = buf;
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;  // 0: no time limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {"1 two-cell charpoly", 1, c1_two_cell_charpoly},
      {"2 two-cell measure", 30, c2_two_cell_measure},
      {"3 oracle equivalence", 60, c3_oracle_equivalence},
      {"4 enlargement", 0, c4_enlargement},
      {"5 circle zeros real", 300, c5_circle_zeros_real},
      {"6 eigen split", 0, c6_eigen_split},
      {"7 Jensen jump", 0, c7_jensen_jump},
      {"8 positivity", 0, c8_positivity},
      {"9 Harnack", 300, c9_harnack},
      {"10 Ising criticality", 0, c10_ising},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && s > c.limit_s) {
      o.ok = false;
      o.note += " (over time limit)";
    }
    std::printf("%s  criterion %-22s %7.2fs  %s\n", o.ok ? "PASS" : "FAIL", c.name, s, o.note.c_str());
    std::fflush(stdout);
    failed += !o.ok;
  }
  return failed ? 1 : 0;
}
