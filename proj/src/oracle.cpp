#include "fisher/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

#include "fisher/charpoly.hpp"
#include "fisher/kasteleyn.hpp"

namespace fisher::oracle {

MatchingList enumerate_matchings(const FisherGraph& g) {
  const int V = g.num_vertices();
  if (V > kMaxMatchingVertices) throw std::invalid_argument("matching enumeration capped at 40 vertices");
  MatchingList out;
  if (V % 2) return out;
  std::vector<bool> used(static_cast<std::size_t>(V), false);
  std::vector<int> stack;
  std::function<void()> rec = [&]() {
    int v = 0;
    while (v < V && used[static_cast<std::size_t>(v)]) ++v;
    if (v == V) {
      std::vector<int> m = stack;
      std::sort(m.begin(), m.end());
      double w = 1.0;
      rational ew = 1;
      int h = 0, vv = 0;
      for (int e : m) {
        w *= g.edge(e).weight;
        ew *= rational(g.edge(e).weight);
        h += g.in_EH(e);
        vv += g.in_EV(e);
      }
      out.matchings.push_back(std::move(m));
      out.weights.push_back(w);
      out.sectors.push_back({h % 2, vv % 2});
      out.total += w;
      out.exact_total += ew;
      out.sector_totals[static_cast<std::size_t>(h % 2)][static_cast<std::size_t>(vv % 2)] += w;
      return;
    }
    used[static_cast<std::size_t>(v)] = true;
    for (int e : g.incident(v)) {
      const Edge& ed = g.edge(e);
      int u = ed.u == v ? ed.v : ed.u;
      if (used[static_cast<std::size_t>(u)]) continue;
      used[static_cast<std::size_t>(u)] = true;
      stack.push_back(e);
      rec();
      stack.pop_back();
      used[static_cast<std::size_t>(u)] = false;
    }
    used[static_cast<std::size_t>(v)] = false;
  };
  rec();
  return out;
}

namespace {

// Determinant by dynamic programming over column subsets: row i is matched
// to a column c not in S (|S| = i), with sign (-1)^{#columns in S above c}.
ExactPoly exact_det(int N, const std::vector<std::vector<std::pair<int, std::pair<rational, std::pair<int, int>>>>>& rows) {
  std::vector<ExactPoly> f(std::size_t{1} << N);
  f[0][{0, 0}] = 1;
  for (std::size_t S = 0; S < f.size(); ++S) {
    if (f[S].empty()) continue;
    const int i = std::popcount(S);
    if (i == N) continue;
    for (const auto& [c, val] : rows[static_cast<std::size_t>(i)]) {
      if (S >> c & 1) continue;
      int above = std::popcount(S >> (c + 1));
      const rational coef = above % 2 ? rational(-val.first) : val.first;
      ExactPoly& dst = f[S | (std::size_t{1} << c)];
      for (const auto& [mono, v] : f[S]) {
        auto key = std::make_pair(mono.first + val.second.first, mono.second + val.second.second);
        rational nv = dst[key] + v * coef;
        if (nv == 0)
          dst.erase(key);
        else
          dst[key] = nv;
      }
    }
    if (i < N - 1) ExactPoly().swap(f[S]);
  }
  return f.back();
}

}  // namespace

ExactPoly symbolic_charpoly_exact(const FisherGraph& g, const Orientation& o) {
  const int N = g.num_vertices();
  if (N > kMaxSymbolicVertices) throw std::invalid_argument("symbolic determinant capped at 16 vertices");
  using Cell = std::pair<int, std::pair<rational, std::pair<int, int>>>;
  std::vector<std::vector<Cell>> rows(static_cast<std::size_t>(N));
  // On 1-wide domains two edges can join the same pair; their monomials
  // add inside one entry.
  std::map<std::pair<int, int>, ExactPoly> entries;
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    rational w(ed.weight);
    if (!o.forward[static_cast<std::size_t>(e)]) w = -w;
    auto add = [&](int r, int c, const rational& v, int a, int b) {
      ExactPoly& p = entries[{r, c}];
      p[{a, b}] += v;
      if (p[{a, b}] == 0) p.erase({a, b});
    };
    add(ed.u, ed.v, w, ed.hx, ed.hy);
    add(ed.v, ed.u, -w, -ed.hx, -ed.hy);
  }
  // By multilinearity each monomial of an entry is a separate choice.
  for (const auto& [rc, poly] : entries)
    for (const auto& [mono, v] : poly) rows[static_cast<std::size_t>(rc.first)].push_back({rc.second, {v, mono}});
  return exact_det(N, rows);
}

LaurentPoly2 symbolic_charpoly_small(const FisherGraph& g, const Orientation& o) {
  std::vector<LaurentPoly2::Term> t;
  for (const auto& [mono, v] : symbolic_charpoly_exact(g, o)) t.push_back({mono.first, mono.second, static_cast<double>(v)});
  if (t.empty()) return LaurentPoly2(0, 0);
  return LaurentPoly2::from_terms(t);
}

SpinEnumeration enumerate_spins(const IsingSpec& spec) {
  spec.validate();
  const int S = spec.m * spec.n;
  if (S > kMaxSpins) throw std::invalid_argument("spin enumeration capped at 20 spins");
  FisherGraph g = to_fisher_graph(spec, false);
  SpinEnumeration r;
  std::map<std::vector<bool>, std::vector<long>> pre;
  for (long mask = 0; mask < (1L << S); ++mask) {
    std::vector<int> s(static_cast<std::size_t>(S));
    for (int i = 0; i < S; ++i) s[static_cast<std::size_t>(i)] = (mask >> i & 1) ? -1 : 1;
    r.Z_ising += ising_weight(spec, s);
    ++r.configurations;
    auto d = dimers_from_spins(g, s);
    if (!d) {
      r.all_matchings = false;
      continue;
    }
    pre[*d].push_back(mask);
  }
  const long all = (1L << S) - 1;
  for (const auto& [img, masks] : pre) {
    if (masks.size() != 2 || (masks[0] ^ masks[1]) != all) r.two_to_one = false;
    double w = 1.0;
    int h = 0, v = 0;
    for (int e = 0; e < g.num_edges(); ++e)
      if (img[static_cast<std::size_t>(e)]) {
        w *= g.edge(e).weight;
        h += g.in_EH(e);
        v += g.in_EV(e);
      }
    r.image_sector_totals[static_cast<std::size_t>(h % 2)][static_cast<std::size_t>(v % 2)] += w;
  }
  r.distinct_images = static_cast<long>(pre.size());
  return r;
}

double uniform_critical_beta(int m, int n, double J) {
  if (!(J > 0.0)) throw std::invalid_argument("coupling must be positive");
  FisherGraph g = build_torus_fisher(m, n);
  MatchingList ml = enumerate_matchings(g);
  // Integer sector polynomials in x, the common connector weight.
  std::array<std::array<std::vector<long>, 2>, 2> Zs;
  int top = 0;
  std::array<int, 2> top_sector{0, 0};
  for (std::size_t k = 0; k < ml.matchings.size(); ++k) {
    int deg = 0;
    for (int e : ml.matchings[k]) deg += g.edge(e).kind != EdgeKind::Triangle;
    auto& p = Zs[static_cast<std::size_t>(ml.sectors[k][0])][static_cast<std::size_t>(ml.sectors[k][1])];
    if (static_cast<int>(p.size()) <= deg) p.resize(static_cast<std::size_t>(deg + 1), 0);
    ++p[static_cast<std::size_t>(deg)];
    if (deg > top) {
      top = deg;
      top_sector = ml.sectors[k];
    }
  }
  std::vector<long> f(static_cast<std::size_t>(top + 1), 0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const auto& p = Zs[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      const long sg = (a == top_sector[0] && b == top_sector[1]) ? 1 : -1;
      for (std::size_t k = 0; k < p.size(); ++k) f[k] += sg * p[k];
    }
  auto eval = [&](const rational& x) {
    rational acc = 0;
    for (std::size_t k = f.size(); k-- > 0;) acc = acc * x + f[k];
    return acc;
  };
  // f(1) = Z_top(1) - rest(1) < 0 for a nontrivial domain, f -> +inf.
  rational lo = 1, hi = 2;
  if (eval(lo) >= 0) throw std::runtime_error("sector polynomial has no root above 1");
  while (eval(hi) <= 0) hi *= 2;
  for (int it = 0; it < 70; ++it) {
    rational mid = (lo + hi) / 2;
    (eval(mid) > 0 ? hi : lo) = mid;
  }
  const double x = static_cast<double>((lo + hi) / 2);
  return std::log(x) / (2.0 * J);
}

bool VerifyReport::all_ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

namespace {
bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)}); }
}  // namespace

VerifyReport verify(const FisherGraph& g) {
  VerifyReport r;
  const Orientation o = canonical_orientation(g);
  if (g.num_vertices() <= kMaxMatchingVertices) {
    MatchingList ml = enumerate_matchings(g);
    const double Zm = static_cast<double>(ml.exact_total);
    if (g.topology() == Topology::Torus) {
      double Zk = partition_function_torus(g, o);
      r.checks.push_back({"partition function: four Pfaffians vs enumeration", close(Zk, Zm, 1e-10), Zm, Zk, ""});
      FourPfaffians s = sector_sums(four_pfaffians(g, o));
      double worst = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          worst = std::max(worst, std::abs(std::abs(s[a][b]) - ml.sector_totals[a][b]) / std::max(1.0, Zm));
      r.checks.push_back({"sector sums: Pfaffian system vs enumeration", worst <= 1e-10, 0.0, worst, "max relative gap"});
    } else {
      double Zk = partition_function_cylinder(g, o);
      r.checks.push_back({"partition function: |Pf K(-1)| vs enumeration", close(Zk, Zm, 1e-10), Zm, Zk, ""});
    }
  }
  if (g.num_vertices() <= kMaxSymbolicVertices) {
    LaurentPoly2 exact = symbolic_charpoly_small(g, o);
    double scale = std::max(1.0, exact.max_abs()), gap = 0.0;
    if (g.topology() == Topology::Torus) {
      LaurentPoly2 p = charpoly_torus(g, o);
      const int I = std::max(p.mbound(), exact.mbound()), J = std::max(p.nbound(), exact.nbound());
      for (int i = -I; i <= I; ++i)
        for (int j = -J; j <= J; ++j) gap = std::max(gap, std::abs(p.coeff(i, j) - exact.coeff(i, j)));
    } else {
      LaurentPoly1 p = charpoly_cylinder(g, o);
      const int I = std::max(p.bound(), exact.mbound());
      for (int i = -I; i <= I; ++i) gap = std::max(gap, std::abs(p.coeff(i) - exact.coeff(i, 0)));
      if (exact.nbound() != 0) gap = std::max(gap, scale);
    }
    r.checks.push_back({"charpoly: interpolation vs exact determinant", gap <= 1e-9 * scale, 0.0, gap / scale,
                        "max coefficient gap relative to max coefficient"});
  }
  if (r.checks.empty()) r.checks.push_back({"size", false, 0.0, 0.0, "graph too large for every oracle"});
  return r;
}

}  // namespace fisher::oracle
