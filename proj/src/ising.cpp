#include "fisher/ising.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fisher/charpoly.hpp"

namespace fisher {

namespace {

constexpr double kPi = std::numbers::pi;

int wrap(int a, int m) { return ((a % m) + m) % m; }

}  // namespace

IsingSpec IsingSpec::uniform(int m, int n, double J, double beta) {
  IsingSpec s;
  s.m = m;
  s.n = n;
  s.beta = beta;
  s.J.assign(static_cast<std::size_t>(3 * m * n), J);
  return s;
}

double IsingSpec::coupling(int x, int y, int dir) const {
  if (dir < 0 || dir > 2) throw std::out_of_range("bond direction must be 0, 1 or 2");
  return J[static_cast<std::size_t>((wrap(y, n) * m + wrap(x, m)) * 3 + dir)];
}

void IsingSpec::set_coupling(int x, int y, int dir, double v) {
  if (dir < 0 || dir > 2) throw std::out_of_range("bond direction must be 0, 1 or 2");
  if (x < 0 || x >= m || y < 0 || y >= n) throw std::out_of_range("bond outside the fundamental domain");
  J[static_cast<std::size_t>((y * m + x) * 3 + dir)] = v;
}

void IsingSpec::validate() const {
  if (m < 1 || n < 1) throw std::invalid_argument("Ising periods must be >= 1");
  if (J.size() != static_cast<std::size_t>(3 * m * n)) throw std::invalid_argument("coupling table has the wrong size");
  for (double v : J)
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("couplings must be positive (ferromagnetic)");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive");
}

IsingSpec IsingSpec::with_beta(double b) const {
  IsingSpec s = *this;
  s.beta = b;
  return s;
}

WeightKey connector_of_bond(int m, int n, int x, int y, int dir) {
  switch (dir) {
    case 0: return {EdgeKind::C, wrap(x + 1, m), wrap(y - 1, n), 0};
    case 1: return {EdgeKind::B, wrap(x, m), wrap(y, n), 0};
    case 2: return {EdgeKind::A, wrap(x, m), wrap(y, n), 0};
    default: throw std::out_of_range("bond direction must be 0, 1 or 2");
  }
}

std::pair<int, int> spins_across(const FisherGraph& g, int e) {
  const Edge& ed = g.edge(e);
  const int m = g.m(), n = g.n(), x = ed.cell_x, y = ed.cell_y;
  auto h = [&](int a, int b) { return wrap(b, n) * m + wrap(a, m); };
  switch (ed.kind) {
    case EdgeKind::A: return {h(x, y), h(x - 1, y + 1)};
    case EdgeKind::B: return {h(x, y), h(x, y + 1)};
    case EdgeKind::C: return {h(x - 1, y + 1), h(x, y + 1)};
    default: throw std::invalid_argument("triangle edges do not separate spins");
  }
}

FisherGraph to_fisher_graph(const IsingSpec& spec, bool for_duality) {
  spec.validate();
  if (for_duality && (spec.m % 2 || spec.n % 2))
    throw std::invalid_argument("duality identities need even periods");
  WeightMap w;
  for (int y = 0; y < spec.n; ++y)
    for (int x = 0; x < spec.m; ++x)
      for (int d = 0; d < 3; ++d) w[connector_of_bond(spec.m, spec.n, x, y, d)] = std::exp(2.0 * spec.beta * spec.coupling(x, y, d));
  return build_torus_fisher(spec.m, spec.n, w);
}

ParityNormalization to_fisher_weights(const IsingSpec& spec, bool for_duality) {
  return normalize_weight_parity(to_fisher_graph(spec, for_duality));
}

std::optional<std::vector<bool>> dimers_from_spins(const FisherGraph& g, const std::vector<int>& spins) {
  if (spins.size() != static_cast<std::size_t>(g.m() * g.n())) throw std::invalid_argument("one spin per cell expected");
  std::vector<bool> on(static_cast<std::size_t>(g.num_edges()), false);
  std::vector<int> cover(static_cast<std::size_t>(g.num_vertices()), 0);
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.kind == EdgeKind::Triangle) continue;
    if (ed.weight == 1.0) throw std::invalid_argument("connector weight 1 has no correspondence rule");
    auto [s, t] = spins_across(g, e);
    bool same = spins[static_cast<std::size_t>(s)] == spins[static_cast<std::size_t>(t)];
    if (same == (ed.weight > 1.0)) {
      on[static_cast<std::size_t>(e)] = true;
      ++cover[static_cast<std::size_t>(ed.u)];
      ++cover[static_cast<std::size_t>(ed.v)];
    }
  }
  for (int y = 0; y < g.n(); ++y)
    for (int x = 0; x < g.m(); ++x)
      for (int tri = 0; tri < 2; ++tri) {
        std::vector<int> free;
        for (int t = 0; t < 3; ++t) {
          int v = g.vertex(x, y, 3 * tri + t);
          int c = cover[static_cast<std::size_t>(v)];
          if (c > 1) return std::nullopt;
          if (c == 0) free.push_back(t);
        }
        if (free.empty()) continue;
        if (free.size() != 2) return std::nullopt;
        // The side joining the two free corners is opposite the third.
        int opposite = 3 - free[0] - free[1];
        int e = g.find_edge(EdgeKind::Triangle, x, y, 3 * tri + opposite);
        on[static_cast<std::size_t>(e)] = true;
        ++cover[static_cast<std::size_t>(g.edge(e).u)];
        ++cover[static_cast<std::size_t>(g.edge(e).v)];
      }
  for (int c : cover)
    if (c != 1) return std::nullopt;
  return on;
}

double ising_weight(const IsingSpec& spec, const std::vector<int>& spins) {
  double acc = 0.0;
  for (int y = 0; y < spec.n; ++y)
    for (int x = 0; x < spec.m; ++x) {
      const int s = spins[static_cast<std::size_t>(y * spec.m + x)];
      const int nb[3] = {y * spec.m + wrap(x + 1, spec.m), wrap(y + 1, spec.n) * spec.m + x,
                         wrap(y + 1, spec.n) * spec.m + wrap(x - 1, spec.m)};
      for (int d = 0; d < 3; ++d) acc += spec.coupling(x, y, d) * s * spins[static_cast<std::size_t>(nb[d])];
    }
  return std::exp(spec.beta * acc);
}

DualityReport duality_report(const FisherGraph& g, const Orientation& o) {
  DualityReport r;
  r.pf = four_pfaffians(g, o);
  FourPfaffians s = sector_sums(r.pf);
  // Sector signs of the canonical orientation: + for (0,0), - otherwise.
  double scale = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      r.sectors[a][b] = (a == 0 && b == 0) ? s[a][b] : -s[a][b];
      scale = std::max(scale, std::abs(r.sectors[a][b]));
    }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      if (r.sectors[a][b] < -1e-8 * scale) r.consistent = false;
    }
  r.positivity_ok = r.pf[1][0] > 0 && r.pf[0][1] > 0 && r.pf[1][1] > 0;
  r.z00_max = r.sectors[0][0] >= std::max({r.sectors[1][0], r.sectors[0][1], r.sectors[1][1]});
  return r;
}

double ising_partition_from_dimers(const IsingSpec& spec) {
  FisherGraph g = to_fisher_graph(spec, true);
  DualityReport d = duality_report(g, canonical_orientation(g));
  double logpre = 0.0;
  for (double J : spec.J) logpre -= spec.beta * J;
  return 2.0 * std::exp(logpre) * d.sectors[0][0];
}

namespace {

FourPfaffians pfaffians_at(const IsingSpec& spec, double beta) {
  FisherGraph g = to_fisher_graph(spec.with_beta(beta), false);
  return four_pfaffians(g, canonical_orientation(g));
}

SpectralReport torus_scan(const IsingSpec& spec, double beta, int grid) {
  FisherGraph g = to_fisher_graph(spec.with_beta(beta), false);
  LaurentPoly2 p = charpoly_torus(g, canonical_orientation(g));
  int gmin = 8 * std::max(p.mbound(), p.nbound());
  return scan_unit_torus(p, std::max(grid, gmin));
}

}  // namespace

CriticalResult critical_beta(const IsingSpec& spec, double lo, double hi, int grid) {
  spec.validate();
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("bracket must satisfy 0 < lo < hi");
  FourPfaffians a = pfaffians_at(spec, lo), b = pfaffians_at(spec, hi);
  int found = 0, th = 0, ta = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if ((a[i][j] > 0) != (b[i][j] > 0)) {
        ++found;
        th = i;
        ta = j;
      }
  if (found == 0)
    throw std::runtime_error("no Pfaffian changes sign on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                             "]; widen the bracket");
  if (found > 1) throw std::runtime_error("several Pfaffians change sign in the bracket; narrow it");

  CriticalResult r;
  r.z_sign = th ? -1 : 1;
  r.w_sign = ta ? -1 : 1;
  const bool lo_pos = a[th][ta] > 0;
  while (hi - lo > 1e-13 && r.iterations < 200) {
    double mid = 0.5 * (lo + hi);
    double v = pfaffians_at(spec, mid)[th][ta];
    if (v == 0.0) {
      lo = hi = mid;
      break;
    }
    ((v > 0) == lo_pos ? lo : hi) = mid;
    ++r.iterations;
  }
  r.beta = 0.5 * (lo + hi);

  r.at_critical = torus_scan(spec, r.beta, grid);
  r.above = torus_scan(spec, r.beta + 0.05, grid);
  bool below_ok = true;
  if (r.beta - 0.05 > 0.0) {
    r.below = torus_scan(spec, r.beta - 0.05, grid);
    below_ok = r.below.verdict == "empty";
  }
  const std::string where = std::string("(z,w)=(") + (r.z_sign > 0 ? "1" : "-1") + "," + (r.w_sign > 0 ? "1" : "-1") + ")";
  r.validated = r.at_critical.verdict == "single-real" && r.at_critical.location == where && below_ok &&
                r.above.verdict == "empty";
  return r;
}

PositivityReport positivity_check(const LaurentPoly2& p, int grid, double neg_tol) {
  if (grid < 4) throw std::invalid_argument("positivity grid must be >= 4");
  auto f = [&](double t, double u) { return p(std::polar(1.0, t), std::polar(1.0, u)).real(); };
  PositivityReport r;
  r.max_abs = 0.0;
  r.min_value = f(0.0, 0.0);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      double t = 2 * kPi * i / grid, u = 2 * kPi * j / grid;
      double v = f(t, u);
      r.max_abs = std::max(r.max_abs, std::abs(v));
      if (v < r.min_value || (i == 0 && j == 0)) {
        r.min_value = v;
        r.theta = t;
        r.phi = u;
      }
    }
  // Pattern search from the grid minimum.
  for (double h = 2 * kPi / grid; h > 1e-12; h *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy) {
          if (!dx && !dy) continue;
          double v = f(r.theta + dx * h, r.phi + dy * h);
          if (v < r.min_value) {
            r.min_value = v;
            r.theta += dx * h;
            r.phi += dy * h;
            moved = true;
          }
        }
    }
  }
  r.ok = r.min_value >= -neg_tol * r.max_abs;
  return r;
}

namespace {
template <class F>
SliceMin slice_min(F f, int grid) {
  if (grid < 4) throw std::invalid_argument("slice grid must be >= 4");
  SliceMin r{f(0.0), 0.0};
  for (int i = 1; i < grid; ++i) {
    double t = 2 * kPi * i / grid, v = f(t);
    if (v < r.min_value) r = {v, t};
  }
  for (double h = 2 * kPi / grid; h > 1e-13; h *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (int d : {-1, 1}) {
        double v = f(r.theta + d * h);
        if (v < r.min_value) {
          r = {v, r.theta + d * h};
          moved = true;
        }
      }
    }
  }
  return r;
}
}  // namespace

SliceMin slice_min_w(const LaurentPoly2& p, int w_sign, int grid) {
  const cplx w(static_cast<double>(w_sign), 0.0);
  return slice_min([&](double t) { return p(std::polar(1.0, t), w).real(); }, grid);
}

SliceMin slice_min_z(const LaurentPoly2& p, int z_sign, int grid) {
  const cplx z(static_cast<double>(z_sign), 0.0);
  return slice_min([&](double t) { return p(z, std::polar(1.0, t)).real(); }, grid);
}

}  // namespace fisher
