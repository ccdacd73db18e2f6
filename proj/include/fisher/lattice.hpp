#pragma once

// Periodic Fisher graphs (honeycomb with every vertex blown up into a
// triangle) on tori and cylinders, their embeddings, and orientations.
//
// Cell layout. Each cell (x, y) holds two triangles A = {A0, A1, A2} and
// B = {B0, B1, B2}. The connecting (non-triangle) edges are
//   a(x,y): A0(x,y) -- B0(x,y)
//   b(x,y): B1(x,y) -- A1(x+1,y)   crosses the x seam when x == m-1
//   c(x,y): B2(x,y) -- A2(x,y+1)   crosses the y seam when y == n-1
// The x seam edges form E_H, the y seam edges form E_V. A cylinder of
// period m and height h is the m x h torus with E_V deleted.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fisher {

enum class Topology { Torus, Cylinder };
enum class EdgeKind { Triangle, A, B, C };

// Local vertex slot inside a cell.
enum Site : int { kA0 = 0, kA1, kA2, kB0, kB1, kB2, kSitesPerCell };

// Triangle sides are indexed by the slot they are opposite to:
//   0: A1A2  1: A2A0  2: A0A1  3: B1B2  4: B2B0  5: B0B1
inline constexpr int kTriangleSides = 6;

struct Edge {
  int u = 0;  // canonical tail
  int v = 0;  // canonical head
  double weight = 1.0;
  EdgeKind kind = EdgeKind::Triangle;
  int cell_x = 0;
  int cell_y = 0;
  int side = 0;  // triangle side index; 0 for connectors
  int hx = 0;    // seam crossings when traversed u -> v
  int hy = 0;
  int dx = 0;  // cell offset of v relative to u in the universal cover
  int dy = 0;
};

// Key for per-edge weights: connectors use side = 0.
struct WeightKey {
  EdgeKind kind;
  int x;
  int y;
  int side = 0;
  auto operator<=>(const WeightKey&) const = default;
};
using WeightMap = std::map<WeightKey, double>;

// A dart is an edge traversed in one direction: 2*e (u->v) or 2*e+1 (v->u).
using Dart = int;
inline constexpr int dart_edge(Dart d) { return d >> 1; }
inline constexpr bool dart_reversed(Dart d) { return (d & 1) != 0; }

// Faces are stored as cyclic dart sequences traversed clockwise in the
// reference embedding.
using Face = std::vector<Dart>;

class FisherGraph {
 public:
  FisherGraph() = default;

  int m() const { return m_; }
  int n() const { return n_; }
  Topology topology() const { return topology_; }
  int num_vertices() const { return kSitesPerCell * m_ * n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  int vertex(int x, int y, int site) const;
  // Inverse of vertex(): {x, y, site}.
  std::array<int, 3> locate(int v) const;

  // Edges incident to v.
  const std::vector<int>& incident(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  // Index of the edge described by key, or -1.
  int find_edge(EdgeKind kind, int x, int y, int side = 0) const;

  bool in_EH(int e) const { return edge(e).hx != 0; }
  bool in_EV(int e) const { return edge(e).hy != 0; }

  // Faces of the embedding restricted to the edges with active[e] true.
  // An empty mask means all edges.
  std::vector<Face> faces(const std::vector<bool>& active = {}) const;

  // Faces of the fundamental domain cut open along both seams; the last
  // entry is the outer face.
  const std::vector<Face>& planar_faces() const { return planar_faces_; }

  // Reference drawing in the universal cover; used for the rotation system.
  std::array<double, 2> position(int v) const;
  // Displacement of dart d in the cover.
  std::array<double, 2> displacement(Dart d) const;
  int tail(Dart d) const { return dart_reversed(d) ? edge(dart_edge(d)).v : edge(dart_edge(d)).u; }
  int head(Dart d) const { return dart_reversed(d) ? edge(dart_edge(d)).u : edge(dart_edge(d)).v; }
  // Signed area enclosed by a closed face walk in the cover (negative when
  // clockwise); meaningless for walks that wrap around.
  double signed_area(const Face& f) const;

  FisherGraph with_weights(const std::vector<double>& w) const;

  // Assembles a graph from an explicit edge list in the cell layout above.
  static FisherGraph from_edges(int m, int n, Topology topo, std::vector<Edge> edges);

 private:
  void finalize();

  int m_ = 0;
  int n_ = 0;
  Topology topology_ = Topology::Torus;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<Face> planar_faces_;
  std::map<WeightKey, int> index_;
};

FisherGraph build_torus_fisher(int m, int n, const WeightMap& weights = {});
FisherGraph build_cylinder_fisher(int period, int height, const WeightMap& weights = {});

std::string to_string(EdgeKind k);
EdgeKind edge_kind_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// Orientations

// forward[e] is true when edge e points from its canonical tail to its head.
struct Orientation {
  std::vector<bool> forward;

  bool operator==(const Orientation&) const = default;
  int size() const { return static_cast<int>(forward.size()); }
  // Tail and head of edge e under this orientation.
  std::pair<int, int> arc(const FisherGraph& g, int e) const;
  // Whether dart d runs along the orientation of its edge.
  bool agrees(Dart d) const { return forward[static_cast<std::size_t>(dart_edge(d))] != dart_reversed(d); }
};

// Number of darts of f that agree with o.
int clockwise_count(const Orientation& o, const Face& f);
bool is_clockwise_odd(const Orientation& o, const Face& f);

// Kasteleyn orientation built by the dual spanning tree method.
//   Cylinder: every face of the (planar) annulus graph except the outer
//             boundary face is clockwise-odd.
//   Torus:    every internal face of the cut-open fundamental domain is
//             clockwise-odd; seam edges are left in canonical direction.
Orientation orient_clockwise_odd(const FisherGraph& g);

// Cell-periodic orientation: triangle sides run clockwise around their
// triangle, connectors keep their canonical direction. Every triangle and
// every 12-gon of the torus is clockwise-odd, and the orientation lifts to
// any enlargement.
Orientation orient_periodic(const FisherGraph& g);

// Torus only. Keeps base on the cut-open domain, orients E_H so that G - E_V
// is clockwise-odd and E_V so that G - E_H is, then reverses every seam
// edge. Faces crossing a seam are therefore clockwise-even, and reversing
// E_H (or E_V) gives back a Kasteleyn orientation of G - E_V (or G - E_H).
// With this convention Z = |-Pf K^00 + Pf K^10 + Pf K^01 + Pf K^11| / 2.
Orientation orient_crossing(const FisherGraph& g, const Orientation& base);

// Cylinder only. base must be clockwise-odd on the strip obtained by cutting
// along the x seam. E_H is completed so the annulus is Kasteleyn and then
// reversed, so that K(-1) is a Kasteleyn matrix and P(-1) = Z^2.
Orientation orient_cylinder(const FisherGraph& g, const Orientation& base);

// The orientation used by the analysis pipelines: crossing orientation on a
// torus, marked Kasteleyn orientation on a cylinder, both built on top of
// orient_periodic. Both coincide with orient_periodic itself, which is what
// makes enlargement and block diagonalization exact.
Orientation canonical_orientation(const FisherGraph& g);

// Reverse every edge for which mask[e] is true.
Orientation reversed_on(const Orientation& o, const std::vector<bool>& mask);
std::vector<bool> seam_mask_x(const FisherGraph& g);
std::vector<bool> seam_mask_y(const FisherGraph& g);

// ---------------------------------------------------------------------------
// Weight transforms

// Edge weight W(uv) -> s(u) s(v) W(uv).
FisherGraph gauge_transform(const FisherGraph& g, const std::vector<double>& scale);

// The km x ln quotient with weights copied periodically. Cylinders need l == 1.
FisherGraph enlarge_domain(const FisherGraph& g, int k, int l);
// Copies a small-domain orientation onto an enlargement of it.
Orientation lift_orientation(const FisherGraph& small, const Orientation& o, const FisherGraph& big);

struct ParityNormalization {
  FisherGraph graph;
  std::vector<int> inverted;  // edges whose weight was replaced by 1/w
  double scale = 1.0;         // Z_{g,theta tau} = scale * Z_{hat g,theta tau}
};

// Weight-parity conditions: every triangle touches an even number of
// connectors with weight < 1, and each seam crosses an even number of them.
bool triangle_parity_ok(const FisherGraph& g);
bool seam_parity_ok(const FisherGraph& g);

// Inverts a set S of connector weights to reach the all-weights->=1 form.
// S must be even at every triangle and cross each seam an even number of
// times, otherwise sector sums would not be preserved; the set is found by
// solving that mod-2 system with the <1 connectors as the target.
ParityNormalization normalize_weight_parity(const FisherGraph& g);

}  // namespace fisher
