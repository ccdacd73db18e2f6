#pragma once

// Limiting dimer measure on the infinite cylinder: inverse Kasteleyn
// entries as contour integrals, edge probabilities, covariances and the
// free energy per fundamental domain.

#include <complex>
#include <string>
#include <vector>

#include "fisher/charpoly.hpp"
#include "fisher/kasteleyn.hpp"
#include "fisher/lattice.hpp"

namespace fisher {

// An edge of the infinite cylinder: column x is unbounded, row y is in
// [0, height). Triangle sides also need `side`.
struct EdgeRef {
  EdgeKind kind = EdgeKind::A;
  long x = 0;
  int y = 0;
  int side = 0;
};

// "kind:x:y" or "T:x:y:side".
EdgeRef parse_edge_ref(const std::string& s);
std::string to_string(const EdgeRef& e);

// A vertex of the infinite cylinder: fundamental domain k, quotient vertex s.
struct CylVertex {
  long k = 0;
  int s = 0;
};

struct InvKEntry {
  cplx value{0.0, 0.0};
  bool pv_corrected = false;  // a node on the unit circle was handled
  cplx residue_term{0.0, 0.0};
};

// lim_{l -> inf} K^{-1}_{m x 2l}(-1) entries restricted to a fixed set of
// quotient vertices. Without a node the integral runs over |z| = 1. With a
// node z0 in {1, -1} it runs over |z| = r inside the disk and half the
// residue at z0 is added, which is the principal value.
class InverseKernel {
 public:
  InverseKernel(const FisherGraph& g, const Orientation& o, std::vector<int> sites, long max_shift = 32);

  InvKEntry entry(long dk, int s, int t) const;
  InvKEntry entry(const CylVertex& v, const CylVertex& w) const { return entry(v.k - w.k, v.s, w.s); }

  bool has_node() const { return node_ != 0; }
  int node() const { return node_; }
  double contour_radius() const { return radius_; }
  int nodes_used() const { return static_cast<int>(zs_.size()); }

 private:
  int slot(int s) const;
  void integrate(int N);
  cplx sum(const std::vector<cplx>& zs, const std::vector<Eigen::MatrixXcd>& mats, const std::vector<cplx>& wts,
           long dk, int i, int j) const;

  const FisherGraph* g_;
  KasteleynOperator K_;
  std::vector<int> sites_;
  int node_ = 0;
  double radius_ = 1.0;
  std::vector<cplx> zs_, wts_;
  std::vector<Eigen::MatrixXcd> mats_;
  std::vector<cplx> ozs_;
  std::vector<Eigen::MatrixXcd> omats_;
  std::vector<cplx> rz_, rwts_;
  std::vector<Eigen::MatrixXcd> rmats_;
};

InvKEntry inv_k_limit(const FisherGraph& g, const Orientation& o, const CylVertex& v, const CylVertex& w);

// K^{-1}_{m x 2l}(-1) entry by the Fourier sum over z^{2l} = -1.
cplx finite_inverse_entry(const FisherGraph& g, const Orientation& o, int l, const CylVertex& v, const CylVertex& w);

// Endpoints of an infinite-cylinder edge, tail first as in the quotient.
std::pair<CylVertex, CylVertex> endpoints(const FisherGraph& g, const EdgeRef& e);
double edge_weight(const FisherGraph& g, const EdgeRef& e);

double cylinder_set_probability(const FisherGraph& g, const Orientation& o, const std::vector<EdgeRef>& edges);

struct Covariance {
  double value = 0.0;     // Pr(e1 & e2) - Pr(e1) Pr(e2)
  double p1 = 0.0;
  double p2 = 0.0;
  double joint = 0.0;
  double display = 0.0;   // x1 x2 (|K K + K K - K K| - |K K|) written out entrywise
};

Covariance covariance(const FisherGraph& g, const Orientation& o, const EdgeRef& e1, const EdgeRef& e2);

enum class Decay { Exponential, Constant, Undetermined };
std::string to_string(Decay d);

struct CorrelationCurve {
  std::vector<int> distances;
  std::vector<double> covariances;
  Decay classification = Decay::Undetermined;
  double rate = 0.0;      // fitted slope of log|cov| (Exponential)
  double plateau = 0.0;   // level (Constant)
  double r2 = 0.0;
  bool at_floor = false;  // every |cov| below 1e-12
};

// cov(e1, e2 shifted by d fundamental domains) for d = 1..dmax.
CorrelationCurve correlation_curve(const FisherGraph& g, const Orientation& o, const EdgeRef& e1, const EdgeRef& e2,
                                   int dmax);
void classify_decay(CorrelationCurve& c);

struct FreeEnergy {
  double value = 0.0;  // (1/4pi) int log P
  std::vector<std::pair<int, double>> riemann;  // (l, (1/4l) log P_{m x 2l}(-1))
};

FreeEnergy free_energy_cylinder(const LaurentPoly1& p);

}  // namespace fisher
