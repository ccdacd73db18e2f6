#include "fisher/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace fisher {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
const std::array<double, 2> kE1{kSqrt3, 0.0};
const std::array<double, 2> kE2{kSqrt3 / 2.0, 1.5};
const std::array<double, 2> kDelta{kSqrt3 / 2.0, 0.5};

std::array<double, 2> local_offset(int site) {
  // Triangle corners sit a quarter of the way towards their honeycomb
  // neighbour.
  std::array<double, 2> d{};
  switch (site) {
    case kA0: d = kDelta; break;
    case kA1: d = {kDelta[0] - kE1[0], kDelta[1] - kE1[1]}; break;
    case kA2: d = {kDelta[0] - kE2[0], kDelta[1] - kE2[1]}; break;
    case kB0: d = {-kDelta[0], -kDelta[1]}; break;
    case kB1: d = {kE1[0] - kDelta[0], kE1[1] - kDelta[1]}; break;
    case kB2: d = {kE2[0] - kDelta[0], kE2[1] - kDelta[1]}; break;
    default: throw std::logic_error("bad site");
  }
  std::array<double, 2> base = site < kB0 ? std::array<double, 2>{0.0, 0.0} : kDelta;
  return {base[0] + 0.25 * d[0], base[1] + 0.25 * d[1]};
}

// Endpoints of triangle side s (opposite slot s), in canonical order.
std::pair<int, int> side_sites(int s) {
  static const std::array<std::pair<int, int>, 6> t{{{kA1, kA2}, {kA2, kA0}, {kA0, kA1},
                                                     {kB1, kB2}, {kB2, kB0}, {kB0, kB1}}};
  return t[static_cast<std::size_t>(s)];
}

double lookup(const WeightMap& w, WeightKey k) {
  auto it = w.find(k);
  if (it == w.end()) return 1.0;
  if (!(it->second > 0.0) || !std::isfinite(it->second))
    throw std::invalid_argument("edge weights must be positive and finite");
  return it->second;
}

FisherGraph build_common(int m, int n, Topology topo, const WeightMap& weights);

}  // namespace

int FisherGraph::vertex(int x, int y, int site) const {
  x = ((x % m_) + m_) % m_;
  y = ((y % n_) + n_) % n_;
  return (y * m_ + x) * kSitesPerCell + site;
}

std::array<int, 3> FisherGraph::locate(int v) const {
  int cell = v / kSitesPerCell;
  return {cell % m_, cell / m_, v % kSitesPerCell};
}

int FisherGraph::find_edge(EdgeKind kind, int x, int y, int side) const {
  auto it = index_.find(WeightKey{kind, x, y, kind == EdgeKind::Triangle ? side : 0});
  return it == index_.end() ? -1 : it->second;
}

std::array<double, 2> FisherGraph::position(int v) const {
  auto [x, y, s] = locate(v);
  auto o = local_offset(s);
  return {o[0] + x * kE1[0] + y * kE2[0], o[1] + x * kE1[1] + y * kE2[1]};
}

std::array<double, 2> FisherGraph::displacement(Dart d) const {
  const Edge& e = edge(dart_edge(d));
  auto pu = local_offset(locate(e.u)[2]);
  auto pv = local_offset(locate(e.v)[2]);
  double vx = pv[0] - pu[0] + e.dx * kE1[0] + e.dy * kE2[0];
  double vy = pv[1] - pu[1] + e.dx * kE1[1] + e.dy * kE2[1];
  if (dart_reversed(d)) return {-vx, -vy};
  return {vx, vy};
}

double FisherGraph::signed_area(const Face& f) const {
  double x = 0, y = 0, area = 0;
  for (Dart d : f) {
    auto v = displacement(d);
    area += x * (y + v[1]) - (x + v[0]) * y;
    x += v[0];
    y += v[1];
  }
  return 0.5 * area;
}

std::vector<Face> FisherGraph::faces(const std::vector<bool>& active) const {
  auto on = [&](int e) { return active.empty() || active[static_cast<std::size_t>(e)]; };
  const int V = num_vertices();
  // Outgoing darts at each vertex, counterclockwise.
  std::vector<std::vector<Dart>> rot(static_cast<std::size_t>(V));
  for (int e = 0; e < num_edges(); ++e) {
    if (!on(e)) continue;
    rot[static_cast<std::size_t>(edges_[static_cast<std::size_t>(e)].u)].push_back(2 * e);
    rot[static_cast<std::size_t>(edges_[static_cast<std::size_t>(e)].v)].push_back(2 * e + 1);
  }
  std::vector<int> slot(static_cast<std::size_t>(2 * num_edges()), -1);
  for (auto& r : rot) {
    std::sort(r.begin(), r.end(), [&](Dart a, Dart b) {
      auto da = displacement(a), db = displacement(b);
      return std::atan2(da[1], da[0]) < std::atan2(db[1], db[0]);
    });
    for (std::size_t i = 0; i < r.size(); ++i) slot[static_cast<std::size_t>(r[i])] = static_cast<int>(i);
  }
  auto next = [&](Dart d) {
    Dart r = d ^ 1;
    const auto& lst = rot[static_cast<std::size_t>(tail(r))];
    int i = slot[static_cast<std::size_t>(r)];
    int k = static_cast<int>(lst.size());
    return lst[static_cast<std::size_t>((i + 1) % k)];
  };
  std::vector<bool> seen(static_cast<std::size_t>(2 * num_edges()), false);
  std::vector<Face> out;
  for (int d0 = 0; d0 < 2 * num_edges(); ++d0) {
    if (!on(dart_edge(d0)) || seen[static_cast<std::size_t>(d0)]) continue;
    Face f;
    Dart d = d0;
    while (!seen[static_cast<std::size_t>(d)]) {
      seen[static_cast<std::size_t>(d)] = true;
      f.push_back(d);
      d = next(d);
    }
    out.push_back(std::move(f));
  }
  return out;
}

FisherGraph FisherGraph::with_weights(const std::vector<double>& w) const {
  if (static_cast<int>(w.size()) != num_edges()) throw std::invalid_argument("weight vector size mismatch");
  FisherGraph g = *this;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i])) throw std::invalid_argument("edge weights must be positive and finite");
    g.edges_[i].weight = w[i];
  }
  return g;
}

FisherGraph FisherGraph::from_edges(int m, int n, Topology topo, std::vector<Edge> edges) {
  FisherGraph g;
  g.m_ = m;
  g.n_ = n;
  g.topology_ = topo;
  g.edges_ = std::move(edges);
  g.finalize();
  return g;
}

void FisherGraph::finalize() {
  adjacency_.assign(static_cast<std::size_t>(num_vertices()), {});
  index_.clear();
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& ed = edges_[static_cast<std::size_t>(e)];
    adjacency_[static_cast<std::size_t>(ed.u)].push_back(e);
    adjacency_[static_cast<std::size_t>(ed.v)].push_back(e);
    index_[WeightKey{ed.kind, ed.cell_x, ed.cell_y, ed.side}] = e;
  }
  std::vector<bool> inner(static_cast<std::size_t>(num_edges()));
  for (int e = 0; e < num_edges(); ++e) inner[static_cast<std::size_t>(e)] = !in_EH(e) && !in_EV(e);
  auto fs = faces(inner);
  auto outer = std::max_element(fs.begin(), fs.end(), [&](const Face& a, const Face& b) {
    return signed_area(a) < signed_area(b);
  });
  std::rotate(outer, outer + 1, fs.end());
  planar_faces_ = std::move(fs);
}

namespace {

FisherGraph build_common(int m, int n, Topology topo, const WeightMap& weights) {
  if (m < 1 || n < 1) throw std::invalid_argument("fundamental domain sizes must be >= 1");
  for (const auto& [k, w] : weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("edge weights must be positive and finite");
  auto id = [&](int x, int y, int s) { return ((((y % n) + n) % n) * m + (((x % m) + m) % m)) * kSitesPerCell + s; };
  std::vector<Edge> es;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < m; ++x) {
      for (int s = 0; s < kTriangleSides; ++s) {
        auto [a, b] = side_sites(s);
        Edge e;
        e.u = id(x, y, a);
        e.v = id(x, y, b);
        e.kind = EdgeKind::Triangle;
        e.cell_x = x;
        e.cell_y = y;
        e.side = s;
        e.weight = lookup(weights, {EdgeKind::Triangle, x, y, s});
        es.push_back(e);
      }
      Edge a;
      a.u = id(x, y, kA0);
      a.v = id(x, y, kB0);
      a.kind = EdgeKind::A;
      a.cell_x = x;
      a.cell_y = y;
      a.weight = lookup(weights, {EdgeKind::A, x, y, 0});
      es.push_back(a);
      Edge b;
      b.u = id(x, y, kB1);
      b.v = id(x + 1, y, kA1);
      b.kind = EdgeKind::B;
      b.cell_x = x;
      b.cell_y = y;
      b.dx = 1;
      b.hx = x == m - 1 ? 1 : 0;
      b.weight = lookup(weights, {EdgeKind::B, x, y, 0});
      es.push_back(b);
      if (topo == Topology::Cylinder && y == n - 1) continue;
      Edge c;
      c.u = id(x, y, kB2);
      c.v = id(x, y + 1, kA2);
      c.kind = EdgeKind::C;
      c.cell_x = x;
      c.cell_y = y;
      c.dy = 1;
      c.hy = y == n - 1 ? 1 : 0;
      c.weight = lookup(weights, {EdgeKind::C, x, y, 0});
      es.push_back(c);
    }
  }
  // A key that names no edge is a typo or a wrong size, not a default.
  std::size_t used = 0;
  for (const Edge& e : es) used += weights.count({e.kind, e.cell_x, e.cell_y, e.kind == EdgeKind::Triangle ? e.side : 0});
  if (used != weights.size()) throw std::invalid_argument("weight given for an edge that does not exist in this domain");
  return FisherGraph::from_edges(m, n, topo, std::move(es));
}

}  // namespace

FisherGraph build_torus_fisher(int m, int n, const WeightMap& weights) {
  return build_common(m, n, Topology::Torus, weights);
}

FisherGraph build_cylinder_fisher(int period, int height, const WeightMap& weights) {
  return build_common(period, height, Topology::Cylinder, weights);
}

std::string to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Triangle: return "T";
    case EdgeKind::A: return "a";
    case EdgeKind::B: return "b";
    case EdgeKind::C: return "c";
  }
  return "?";
}

EdgeKind edge_kind_from_string(const std::string& s) {
  if (s == "T" || s == "t" || s == "triangle" || s == "Triangle") return EdgeKind::Triangle;
  if (s == "a" || s == "A") return EdgeKind::A;
  if (s == "b" || s == "B") return EdgeKind::B;
  if (s == "c" || s == "C") return EdgeKind::C;
  throw std::invalid_argument("unknown edge kind '" + s + "'");
}

// ---------------------------------------------------------------------------

std::pair<int, int> Orientation::arc(const FisherGraph& g, int e) const {
  const Edge& ed = g.edge(e);
  return forward[static_cast<std::size_t>(e)] ? std::pair{ed.u, ed.v} : std::pair{ed.v, ed.u};
}

int clockwise_count(const Orientation& o, const Face& f) {
  int c = 0;
  for (Dart d : f) c += o.agrees(d) ? 1 : 0;
  return c;
}

bool is_clockwise_odd(const Orientation& o, const Face& f) { return clockwise_count(o, f) % 2 == 1; }

namespace {

// Fixes the unknown edges (state -1) so that every constrained face is
// clockwise-odd, peeling faces with a single free edge. Edges that no
// constrained face controls are set forward.
std::vector<bool> complete_orientation(const std::vector<Face>& faces, const std::vector<bool>& constrained,
                                       std::vector<int> state) {
  auto free_odd = [&](const Face& f, int& which) {
    std::map<int, int> mult;
    for (Dart d : f)
      if (state[static_cast<std::size_t>(dart_edge(d))] < 0) ++mult[dart_edge(d)];
    int count = 0;
    for (auto [e, k] : mult)
      if (k % 2 == 1) {
        ++count;
        which = e;
      }
    return count;
  };
  auto fix = [&](const Face& f, int e) {
    // count agreeing darts among known edges; the doubly traversed edges
    // contribute one regardless.
    int agree = 0;
    Dart mine = -1;
    for (Dart d : f) {
      int s = state[static_cast<std::size_t>(dart_edge(d))];
      if (dart_edge(d) == e) {
        mine = d;
        continue;
      }
      if (s < 0) {
        agree += 0;  // paired with its reverse below
        continue;
      }
      if ((s == 1) != dart_reversed(d)) ++agree;
    }
    // unknown doubly-used edges add exactly one each
    std::map<int, int> mult;
    for (Dart d : f)
      if (dart_edge(d) != e && state[static_cast<std::size_t>(dart_edge(d))] < 0) ++mult[dart_edge(d)];
    for (auto [x, k] : mult) agree += k / 2;
    bool want_agree = agree % 2 == 0;
    state[static_cast<std::size_t>(e)] = (want_agree != dart_reversed(mine)) ? 1 : 0;
  };
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < faces.size(); ++i) {
      if (!constrained[i]) continue;
      int which = -1;
      if (free_odd(faces[i], which) == 1) {
        fix(faces[i], which);
        progress = true;
      }
    }
    if (!progress) {
      // Unknown edges that sit on no constrained face with odd multiplicity
      // are unconstrained.
      std::vector<bool> controlled(state.size(), false);
      for (std::size_t i = 0; i < faces.size(); ++i) {
        if (!constrained[i]) continue;
        std::map<int, int> mult;
        for (Dart d : faces[i]) ++mult[dart_edge(d)];
        for (auto [e, k] : mult)
          if (k % 2 == 1) controlled[static_cast<std::size_t>(e)] = true;
      }
      for (std::size_t e = 0; e < state.size(); ++e)
        if (state[e] < 0 && !controlled[e]) {
          state[e] = 1;
          progress = true;
          break;
        }
    }
  }
  std::vector<bool> out(state.size());
  for (std::size_t e = 0; e < state.size(); ++e) {
    if (state[e] < 0) throw std::runtime_error("orientation peeling stalled: face data is not planar");
    out[e] = state[e] == 1;
  }
  Orientation o{out};
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (constrained[i] && !is_clockwise_odd(o, faces[i]))
      throw std::runtime_error("face parity constraints are inconsistent");
  return out;
}

// First non-triangle face containing a dart leaving v.
std::size_t cap_through(const FisherGraph& g, const std::vector<Face>& faces, int v) {
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (faces[i].size() == 3) continue;
    for (Dart d : faces[i])
      if (g.tail(d) == v) return i;
  }
  throw std::logic_error("no boundary face through vertex");
}

std::vector<bool> mask_where(const FisherGraph& g, bool (*pred)(const FisherGraph&, int)) {
  std::vector<bool> m(static_cast<std::size_t>(g.num_edges()));
  for (int e = 0; e < g.num_edges(); ++e) m[static_cast<std::size_t>(e)] = pred(g, e);
  return m;
}

// Unknown state for edges in mask, base orientation elsewhere.
std::vector<int> state_from(const Orientation& base, const std::vector<bool>& unknown) {
  std::vector<int> s(base.forward.size());
  for (std::size_t e = 0; e < s.size(); ++e) s[e] = unknown[e] ? -1 : (base.forward[e] ? 1 : 0);
  return s;
}

}  // namespace

std::vector<bool> seam_mask_x(const FisherGraph& g) {
  return mask_where(g, [](const FisherGraph& h, int e) { return h.in_EH(e); });
}

std::vector<bool> seam_mask_y(const FisherGraph& g) {
  return mask_where(g, [](const FisherGraph& h, int e) { return h.in_EV(e); });
}

Orientation reversed_on(const Orientation& o, const std::vector<bool>& mask) {
  Orientation r = o;
  for (std::size_t e = 0; e < r.forward.size(); ++e)
    if (mask[e]) r.forward[e] = !r.forward[e];
  return r;
}

Orientation orient_clockwise_odd(const FisherGraph& g) {
  const int E = g.num_edges();
  std::vector<bool> active(static_cast<std::size_t>(E), true);
  std::vector<Face> faces;
  std::vector<bool> constrained;
  if (g.topology() == Topology::Torus) {
    for (int e = 0; e < E; ++e) active[static_cast<std::size_t>(e)] = !g.in_EH(e) && !g.in_EV(e);
    faces = g.planar_faces();
    constrained.assign(faces.size(), true);
    constrained.back() = false;
  } else {
    faces = g.faces();
    constrained.assign(faces.size(), true);
    constrained[cap_through(g, faces, g.vertex(0, g.n() - 1, kB2))] = false;
  }
  // Spanning tree by BFS, oriented canonically.
  std::vector<int> state(static_cast<std::size_t>(E), -1);
  for (int e = 0; e < E; ++e)
    if (!active[static_cast<std::size_t>(e)]) state[static_cast<std::size_t>(e)] = 1;
  std::vector<bool> reached(static_cast<std::size_t>(g.num_vertices()), false);
  std::queue<int> q;
  q.push(0);
  reached[0] = true;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int e : g.incident(v)) {
      if (!active[static_cast<std::size_t>(e)]) continue;
      int w = g.edge(e).u == v ? g.edge(e).v : g.edge(e).u;
      if (reached[static_cast<std::size_t>(w)]) continue;
      reached[static_cast<std::size_t>(w)] = true;
      state[static_cast<std::size_t>(e)] = 1;
      q.push(w);
    }
  }
  if (std::find(reached.begin(), reached.end(), false) != reached.end())
    throw std::runtime_error("fundamental domain is disconnected");
  return Orientation{complete_orientation(faces, constrained, state)};
}

Orientation orient_periodic(const FisherGraph& g) {
  Orientation o{std::vector<bool>(static_cast<std::size_t>(g.num_edges()), true)};
  // Triangle faces of the full graph are traced clockwise.
  for (const Face& f : g.faces()) {
    if (f.size() != 3) continue;
    bool tri = true;
    for (Dart d : f) tri = tri && g.edge(dart_edge(d)).kind == EdgeKind::Triangle;
    if (!tri) continue;
    for (Dart d : f) o.forward[static_cast<std::size_t>(dart_edge(d))] = !dart_reversed(d);
  }
  return o;
}

Orientation orient_crossing(const FisherGraph& g, const Orientation& base) {
  if (g.topology() != Topology::Torus) throw std::invalid_argument("crossing orientation needs a torus");
  if (base.size() != g.num_edges()) throw std::invalid_argument("orientation size mismatch");
  auto EH = seam_mask_x(g);
  auto EV = seam_mask_y(g);
  Orientation o = base;
  {
    std::vector<bool> active(EV.size());
    for (std::size_t e = 0; e < active.size(); ++e) active[e] = !EV[e];
    auto faces = g.faces(active);
    std::vector<bool> cons(faces.size(), true);
    cons[cap_through(g, faces, g.vertex(0, g.n() - 1, kB2))] = false;
    auto st = state_from(o, EH);
    for (std::size_t e = 0; e < st.size(); ++e)
      if (EV[e]) st[e] = 1;
    o.forward = complete_orientation(faces, cons, st);
    for (std::size_t e = 0; e < st.size(); ++e)
      if (EV[e]) o.forward[e] = base.forward[e];
  }
  {
    std::vector<bool> active(EH.size());
    for (std::size_t e = 0; e < active.size(); ++e) active[e] = !EH[e];
    auto faces = g.faces(active);
    std::vector<bool> cons(faces.size(), true);
    cons[cap_through(g, faces, g.vertex(g.m() - 1, 0, kB1))] = false;
    auto st = state_from(o, EV);
    auto keep = o.forward;
    o.forward = complete_orientation(faces, cons, st);
    for (std::size_t e = 0; e < st.size(); ++e)
      if (EH[e]) o.forward[e] = keep[e];
  }
  std::vector<bool> seams(EH.size());
  for (std::size_t e = 0; e < seams.size(); ++e) seams[e] = EH[e] || EV[e];
  return reversed_on(o, seams);
}

Orientation orient_cylinder(const FisherGraph& g, const Orientation& base) {
  if (g.topology() != Topology::Cylinder) throw std::invalid_argument("marked cylinder orientation needs a cylinder");
  if (base.size() != g.num_edges()) throw std::invalid_argument("orientation size mismatch");
  auto EH = seam_mask_x(g);
  auto faces = g.faces();
  std::vector<bool> cons(faces.size(), true);
  cons[cap_through(g, faces, g.vertex(0, g.n() - 1, kB2))] = false;
  Orientation o{complete_orientation(faces, cons, state_from(base, EH))};
  return reversed_on(o, EH);
}

Orientation canonical_orientation(const FisherGraph& g) {
  Orientation p = orient_periodic(g);
  if (g.topology() == Topology::Torus) return orient_crossing(g, p);
  return orient_cylinder(g, p);
}

// ---------------------------------------------------------------------------

FisherGraph gauge_transform(const FisherGraph& g, const std::vector<double>& scale) {
  if (static_cast<int>(scale.size()) != g.num_vertices()) throw std::invalid_argument("gauge vector size mismatch");
  for (double s : scale)
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("gauge factors must be positive");
  std::vector<double> w(static_cast<std::size_t>(g.num_edges()));
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    w[static_cast<std::size_t>(e)] = scale[static_cast<std::size_t>(ed.u)] * scale[static_cast<std::size_t>(ed.v)] * ed.weight;
  }
  return g.with_weights(w);
}

FisherGraph enlarge_domain(const FisherGraph& g, int k, int l) {
  if (k < 1 || l < 1) throw std::invalid_argument("enlargement factors must be >= 1");
  if (g.topology() == Topology::Cylinder && l != 1) throw std::invalid_argument("a cylinder can only be enlarged along its period");
  WeightMap w;
  const int M = k * g.m(), N = l * g.n();
  for (const Edge& e : g.edges())
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < l; ++j) w[{e.kind, e.cell_x + i * g.m(), e.cell_y + j * g.n(), e.side}] = e.weight;
  return g.topology() == Topology::Torus ? build_torus_fisher(M, N, w) : build_cylinder_fisher(M, N, w);
}

Orientation lift_orientation(const FisherGraph& small, const Orientation& o, const FisherGraph& big) {
  if (big.m() % small.m() != 0 || big.n() % small.n() != 0 || big.topology() != small.topology())
    throw std::invalid_argument("target is not an enlargement of the source");
  Orientation r{std::vector<bool>(static_cast<std::size_t>(big.num_edges()))};
  for (int e = 0; e < big.num_edges(); ++e) {
    const Edge& b = big.edge(e);
    int s = small.find_edge(b.kind, b.cell_x % small.m(), b.cell_y % small.n(), b.side);
    if (s < 0) throw std::invalid_argument("edge missing from source domain");
    r.forward[static_cast<std::size_t>(e)] = o.forward[static_cast<std::size_t>(s)];
  }
  return r;
}

namespace {

// Connectors incident to each triangle: for triangle A(x,y) and B(x,y).
std::vector<std::vector<int>> triangle_connectors(const FisherGraph& g) {
  std::vector<std::vector<int>> t(static_cast<std::size_t>(2 * g.m() * g.n()));
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.kind == EdgeKind::Triangle) continue;
    for (int v : {ed.u, ed.v}) {
      int cell = v / kSitesPerCell;
      int side = (v % kSitesPerCell) < kB0 ? 0 : 1;
      t[static_cast<std::size_t>(2 * cell + side)].push_back(e);
    }
  }
  return t;
}

bool parity_even(const FisherGraph& g, const std::vector<bool>& s) {
  for (const auto& tri : triangle_connectors(g)) {
    int c = 0;
    for (int e : tri) c += s[static_cast<std::size_t>(e)] ? 1 : 0;
    if (c % 2) return false;
  }
  return true;
}

bool seams_even(const FisherGraph& g, const std::vector<bool>& s) {
  int cx = 0, cy = 0;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (!s[static_cast<std::size_t>(e)]) continue;
    cx += g.in_EH(e) ? 1 : 0;
    cy += g.in_EV(e) ? 1 : 0;
  }
  return cx % 2 == 0 && cy % 2 == 0;
}

std::vector<bool> light_connectors(const FisherGraph& g) {
  std::vector<bool> s(static_cast<std::size_t>(g.num_edges()), false);
  for (int e = 0; e < g.num_edges(); ++e)
    s[static_cast<std::size_t>(e)] = g.edge(e).kind != EdgeKind::Triangle && g.edge(e).weight < 1.0;
  return s;
}

}  // namespace

bool triangle_parity_ok(const FisherGraph& g) { return parity_even(g, light_connectors(g)); }

bool seam_parity_ok(const FisherGraph& g) { return seams_even(g, light_connectors(g)); }

ParityNormalization normalize_weight_parity(const FisherGraph& g) {
  if (g.topology() != Topology::Torus) throw std::invalid_argument("parity normalization needs a torus");
  for (const Edge& e : g.edges())
    if (e.kind == EdgeKind::Triangle && e.weight != 1.0)
      throw std::invalid_argument("parity normalization needs unit triangle weights");
  // Inverting a set S maps matchings M to matchings with connector set
  // C(M) xor S; that is a bijection only if S is even at every triangle,
  // and it keeps the winding sector only if S crosses each seam evenly.
  auto S = light_connectors(g);
  if (!parity_even(g, S) || !seams_even(g, S))
    throw std::runtime_error("parity system infeasible: the connectors with weight < 1 are not even at every triangle and seam");
  ParityNormalization r;
  std::vector<double> w(static_cast<std::size_t>(g.num_edges()));
  for (int e = 0; e < g.num_edges(); ++e) {
    double x = g.edge(e).weight;
    if (S[static_cast<std::size_t>(e)]) {
      r.inverted.push_back(e);
      r.scale *= x;
      x = 1.0 / x;
    }
    w[static_cast<std::size_t>(e)] = x;
  }
  r.graph = g.with_weights(w);
  return r;
}

}  // namespace fisher
