#include "fisher/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fisher/parallel.hpp"
#include "fisher/spectral.hpp"

namespace fisher {

namespace {

constexpr double kPi = std::numbers::pi;

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

cplx ipow(cplx z, long k) {
  if (k == 0) return 1.0;
  return std::polar(std::pow(std::abs(z), static_cast<double>(k)), static_cast<double>(k) * std::arg(z));
}

Eigen::MatrixXcd restricted_inverse(const KasteleynOperator& K, cplx z, const std::vector<int>& sites) {
  Eigen::MatrixXcd M = evaluate(K, z);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  const auto n = static_cast<Eigen::Index>(sites.size());
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(M.rows(), n);
  for (Eigen::Index j = 0; j < n; ++j) rhs(sites[static_cast<std::size_t>(j)], j) = 1.0;
  Eigen::MatrixXcd X = lu.solve(rhs);  // columns of K^{-1}
  Eigen::MatrixXcd R(n, n);
  for (Eigen::Index i = 0; i < n; ++i) R.row(i) = X.row(sites[static_cast<std::size_t>(i)]);
  return R;
}

struct Contour {
  std::vector<cplx> z, w;
  std::vector<Eigen::MatrixXcd> mats;
};

// Trapezoid nodes on |z - c| = rho. For a residue of Q(z)/z the weight is
// rho e^{i phi} / (z N); for the mean over a circle centered at 0 it is 1/N.
Contour make_contour(const KasteleynOperator& K, const std::vector<int>& sites, cplx c, double rho, int N,
                     bool residue) {
  Contour C;
  C.z.resize(static_cast<std::size_t>(N));
  C.w.resize(static_cast<std::size_t>(N));
  C.mats.resize(static_cast<std::size_t>(N));
  // Half-step offset keeps nodes off the real axis, where a node may sit.
  for (int n = 0; n < N; ++n) {
    double phi = 2.0 * kPi * (n + 0.5) / N;
    cplx e = std::polar(1.0, phi);
    C.z[static_cast<std::size_t>(n)] = c + rho * e;
    C.w[static_cast<std::size_t>(n)] = residue ? rho * e / (C.z[static_cast<std::size_t>(n)] * static_cast<double>(N))
                                               : cplx(1.0 / N, 0.0);
  }
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t n) { C.mats[n] = restricted_inverse(K, C.z[n], sites); });
  return C;
}

cplx contour_sum(const Contour& C, long dk, Eigen::Index i, Eigen::Index j) {
  cplx acc = 0.0;
  for (std::size_t n = 0; n < C.z.size(); ++n) acc += C.w[n] * ipow(C.z[n], dk) * C.mats[n](i, j);
  return acc;
}

// Doubles N until the probe entries agree to tol between N and 2N. The
// half-offset grids are not nested, so both levels are computed.
Contour converge(const KasteleynOperator& K, const std::vector<int>& sites, cplx c, double rho, bool residue,
                 const std::vector<long>& probes, int N0, int Nmax) {
  Contour prev = make_contour(K, sites, c, rho, N0, residue);
  const auto n = static_cast<Eigen::Index>(sites.size());
  for (int N = 2 * N0; N <= Nmax; N *= 2) {
    Contour next = make_contour(K, sites, c, rho, N, residue);
    double diff = 0.0, scale = 1.0;
    for (long dk : probes)
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          cplx a = contour_sum(prev, dk, i, j), b = contour_sum(next, dk, i, j);
          diff = std::max(diff, std::abs(a - b));
          scale = std::max(scale, std::abs(b));
        }
    if (diff <= 1e-12 * scale) return next;
    prev = std::move(next);
  }
  throw std::runtime_error("inverse Kasteleyn contour integral did not converge");
}

}  // namespace

EdgeRef parse_edge_ref(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3 && parts.size() != 4) throw std::invalid_argument("edge must be kind:x:y or T:x:y:side, got " + s);
  EdgeRef e;
  e.kind = edge_kind_from_string(parts[0]);
  try {
    e.x = std::stol(parts[1]);
    e.y = std::stoi(parts[2]);
    if (parts.size() == 4) e.side = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer in edge " + s);
  }
  if (e.kind == EdgeKind::Triangle && parts.size() != 4) throw std::invalid_argument("triangle edge needs a side: " + s);
  return e;
}

std::string to_string(const EdgeRef& e) {
  std::string s = to_string(e.kind) + ":" + std::to_string(e.x) + ":" + std::to_string(e.y);
  if (e.kind == EdgeKind::Triangle) s += ":" + std::to_string(e.side);
  return s;
}

std::string to_string(Decay d) {
  switch (d) {
    case Decay::Exponential: return "exponential";
    case Decay::Constant: return "constant";
    default: return "undetermined";
  }
}

namespace {
int quotient_edge(const FisherGraph& g, const EdgeRef& e) {
  if (g.topology() != Topology::Cylinder) throw std::invalid_argument("infinite-cylinder edges need a cylinder quotient");
  if (e.y < 0 || e.y >= g.n()) throw std::out_of_range("edge row outside the cylinder");
  const long m = g.m();
  int x = static_cast<int>(e.x - floor_div(e.x, m) * m);
  int id = g.find_edge(e.kind, x, e.y, e.side);
  if (id < 0) throw std::invalid_argument("no such edge: " + to_string(e));
  return id;
}
}  // namespace

std::pair<CylVertex, CylVertex> endpoints(const FisherGraph& g, const EdgeRef& e) {
  const Edge& q = g.edge(quotient_edge(g, e));
  long k = floor_div(e.x, g.m());
  return {CylVertex{k, q.u}, CylVertex{k + q.hx, q.v}};
}

double edge_weight(const FisherGraph& g, const EdgeRef& e) { return g.edge(quotient_edge(g, e)).weight; }

InverseKernel::InverseKernel(const FisherGraph& g, const Orientation& o, std::vector<int> sites, long max_shift)
    : g_(&g), K_(assemble(g, o)), sites_(std::move(sites)) {
  if (g.topology() != Topology::Cylinder) throw std::invalid_argument("inverse kernel needs a cylinder");
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
  for (int s : sites_)
    if (s < 0 || s >= g.num_vertices()) throw std::out_of_range("site outside the quotient");

  LaurentPoly1 p = charpoly_cylinder(g, o);
  SpectralReport rep = scan_unit_circle(p, std::max(256, 16 * p.bound()));
  if (rep.verdict == "violation" || rep.location == "non-real" || rep.location == "multiple")
    throw std::runtime_error("P vanishes on the unit circle away from a single real point");
  node_ = rep.location == "z=1" ? 1 : rep.location == "z=-1" ? -1 : 0;

  const long D = std::max<long>(1, max_shift);
  constexpr int kMax = 1 << 16;
  if (!node_) {
    Contour c = converge(K_, sites_, 0.0, 1.0, false, {0, D, -D}, 64, kMax);
    zs_ = std::move(c.z);
    wts_ = std::move(c.w);
    mats_ = std::move(c.mats);
    return;
  }

  // Roots other than the node cluster fix the contour radius and the size
  // of the residue circle.
  const cplx z0(static_cast<double>(node_), 0.0);
  std::vector<cplx> coeffs;
  for (double c : p.shifted()) coeffs.emplace_back(c, 0.0);
  double rmax = 0.0, gap = 1.0;
  for (const cplx& r : polynomial_roots(coeffs)) {
    double d = std::abs(r - z0);
    if (d < 1e-4) continue;
    gap = std::min(gap, d);
    if (std::abs(r) < 1.0) rmax = std::max(rmax, std::abs(r));
  }
  radius_ = rmax > 0.0 ? 0.5 * (rmax + 1.0) : 0.5;
  Contour inner = converge(K_, sites_, 0.0, radius_, false, {0, D}, 64, kMax);
  zs_ = std::move(inner.z);
  wts_ = std::move(inner.w);
  mats_ = std::move(inner.mats);
  Contour res = converge(K_, sites_, z0, std::min(0.1, 0.25 * gap), true, {0, D, -D}, 64, kMax);
  rz_ = std::move(res.z);
  rwts_ = std::move(res.w);
  rmats_ = std::move(res.mats);
  // The outer circle mirrors the inner one; roots pair as rho, 1/rho.
  ozs_.resize(zs_.size());
  omats_.resize(zs_.size());
  for (std::size_t n = 0; n < zs_.size(); ++n) ozs_[n] = zs_[n] / (radius_ * radius_);
  parallel_for(zs_.size(), [&](std::size_t n) { omats_[n] = restricted_inverse(K_, ozs_[n], sites_); });
}

int InverseKernel::slot(int s) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
  if (it == sites_.end() || *it != s) throw std::invalid_argument("vertex not in the kernel's site set");
  return static_cast<int>(it - sites_.begin());
}

cplx InverseKernel::sum(const std::vector<cplx>& zs, const std::vector<Eigen::MatrixXcd>& mats,
                        const std::vector<cplx>& wts, long dk, int i, int j) const {
  cplx acc = 0.0;
  for (std::size_t n = 0; n < zs.size(); ++n) acc += wts[n] * ipow(zs[n], dk) * mats[n](i, j);
  return acc;
}

InvKEntry InverseKernel::entry(long dk, int s, int t) const {
  const int i = slot(s), j = slot(t);
  InvKEntry r;
  if (!node_) {
    r.value = sum(zs_, mats_, wts_, dk, i, j);
    return r;
  }
  r.pv_corrected = true;
  r.residue_term = 0.5 * sum(rz_, rmats_, rwts_, dk, i, j);
  if (dk >= 0) {
    r.value = sum(zs_, mats_, wts_, dk, i, j) + r.residue_term;
  } else {
    // |z| = 1/r instead, so z^dk stays small: the outer mean minus half
    // the residue.
    r.value = sum(ozs_, omats_, wts_, dk, i, j) - r.residue_term;
  }
  return r;
}

InvKEntry inv_k_limit(const FisherGraph& g, const Orientation& o, const CylVertex& v, const CylVertex& w) {
  InverseKernel k(g, o, {v.s, w.s}, std::abs(v.k - w.k));
  return k.entry(v, w);
}

cplx finite_inverse_entry(const FisherGraph& g, const Orientation& o, int l, const CylVertex& v, const CylVertex& w) {
  if (l < 1) throw std::invalid_argument("l must be >= 1");
  KasteleynOperator K = assemble(g, o);
  const int L = 2 * l;
  cplx acc = 0.0;
  for (int j = 0; j < L; ++j) {
    cplx zeta = std::polar(1.0, kPi * (2 * j + 1) / L);
    Eigen::MatrixXcd M = restricted_inverse(K, zeta, {v.s, w.s});
    acc += ipow(zeta, v.k - w.k) * M(0, 1);
  }
  return acc / static_cast<double>(L);
}

namespace {

struct Endpoints {
  std::vector<CylVertex> verts;
  double weight = 1.0;
};

Endpoints collect(const FisherGraph& g, const std::vector<EdgeRef>& edges) {
  Endpoints r;
  for (const EdgeRef& e : edges) {
    auto [a, b] = endpoints(g, e);
    r.verts.push_back(a);
    r.verts.push_back(b);
    r.weight *= edge_weight(g, e);
  }
  return r;
}

std::vector<int> sites_of(const std::vector<CylVertex>& vs) {
  std::vector<int> s;
  for (const CylVertex& v : vs) s.push_back(v.s);
  return s;
}

long span_of(const std::vector<CylVertex>& vs) {
  long lo = vs.front().k, hi = lo;
  for (const CylVertex& v : vs) {
    lo = std::min(lo, v.k);
    hi = std::max(hi, v.k);
  }
  return hi - lo;
}

double pf_probability(const InverseKernel& ker, const Endpoints& ep) {
  const auto n = static_cast<Eigen::Index>(ep.verts.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) A(i, j) = ker.entry(ep.verts[static_cast<std::size_t>(i)], ep.verts[static_cast<std::size_t>(j)]).value.real();
  A = 0.5 * (A - A.transpose()).eval();
  return ep.weight * std::abs(pfaffian(A));
}

Covariance covariance_with(const InverseKernel& ker, const FisherGraph& g, const EdgeRef& e1, const EdgeRef& e2) {
  Endpoints a = collect(g, {e1}), b = collect(g, {e2}), ab = collect(g, {e1, e2});
  Covariance c;
  c.p1 = pf_probability(ker, a);
  c.p2 = pf_probability(ker, b);
  c.joint = pf_probability(ker, ab);
  c.value = c.joint - c.p1 * c.p2;
  auto G = [&](const CylVertex& x, const CylVertex& y) { return ker.entry(x, y).value.real(); };
  const CylVertex &v1 = a.verts[0], &w1 = a.verts[1], &v2 = b.verts[0], &w2 = b.verts[1];
  double x1x2 = a.weight * b.weight;
  c.display = x1x2 * (std::abs(G(v1, w1) * G(v2, w2) + G(v1, w2) * G(w1, v2) - G(v1, v2) * G(w1, w2)) -
                      std::abs(G(v1, w1) * G(v2, w2)));
  return c;
}

EdgeRef shifted(const FisherGraph& g, EdgeRef e, long d) {
  e.x += d * g.m();
  return e;
}

}  // namespace

double cylinder_set_probability(const FisherGraph& g, const Orientation& o, const std::vector<EdgeRef>& edges) {
  if (edges.empty()) return 1.0;
  Endpoints ep = collect(g, edges);
  for (std::size_t i = 0; i < ep.verts.size(); ++i)
    for (std::size_t j = i + 1; j < ep.verts.size(); ++j)
      if (ep.verts[i].k == ep.verts[j].k && ep.verts[i].s == ep.verts[j].s)
        throw std::invalid_argument("edges share a vertex");
  InverseKernel ker(g, o, sites_of(ep.verts), span_of(ep.verts));
  return pf_probability(ker, ep);
}

Covariance covariance(const FisherGraph& g, const Orientation& o, const EdgeRef& e1, const EdgeRef& e2) {
  Endpoints ab = collect(g, {e1, e2});
  InverseKernel ker(g, o, sites_of(ab.verts), span_of(ab.verts));
  return covariance_with(ker, g, e1, e2);
}

CorrelationCurve correlation_curve(const FisherGraph& g, const Orientation& o, const EdgeRef& e1, const EdgeRef& e2,
                                   int dmax) {
  if (dmax < 1) throw std::invalid_argument("dmax must be >= 1");
  Endpoints far = collect(g, {e1, shifted(g, e2, dmax)});
  InverseKernel ker(g, o, sites_of(far.verts), span_of(far.verts) + 1);
  CorrelationCurve c;
  c.distances.resize(static_cast<std::size_t>(dmax));
  c.covariances.resize(static_cast<std::size_t>(dmax));
  parallel_for(static_cast<std::size_t>(dmax), [&](std::size_t i) {
    int d = static_cast<int>(i) + 1;
    c.distances[i] = d;
    c.covariances[i] = covariance_with(ker, g, e1, shifted(g, e2, d)).value;
  });
  if (dmax >= 8) classify_decay(c);
  return c;
}

void classify_decay(CorrelationCurve& c) {
  const std::size_t n = c.covariances.size();
  if (n < 8 || c.distances.size() != n) throw std::invalid_argument("decay classification needs at least 8 distances");
  c.at_floor = std::all_of(c.covariances.begin(), c.covariances.end(), [](double v) { return std::abs(v) < 1e-12; });
  if (c.at_floor) {
    c.classification = Decay::Exponential;
    c.rate = -std::numeric_limits<double>::infinity();
    return;
  }
  // A plateau: the last three values agree and stay away from zero.
  double a = c.covariances[n - 3], b = c.covariances[n - 2], d = c.covariances[n - 1];
  double spread = std::max({a, b, d}) - std::min({a, b, d});
  double level = (a + b + d) / 3.0;
  if (spread <= 1e-3 && std::abs(level) >= 1e-3) {
    c.classification = Decay::Constant;
    c.plateau = level;
    return;
  }
  // Least squares of log|cov| against d over the points above the floor.
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(c.covariances[i]) >= 1e-13) {
      xs.push_back(c.distances[i]);
      ys.push_back(std::log(std::abs(c.covariances[i])));
    }
  if (xs.size() >= 3) {
    const double k = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
      syy += (ys[i] - my) * (ys[i] - my);
    }
    c.rate = sxy / sxx;
    c.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
    if (c.rate <= -0.05 && c.r2 >= 0.99) {
      c.classification = Decay::Exponential;
      return;
    }
  }
  c.classification = Decay::Undetermined;
}

FreeEnergy free_energy_cylinder(const LaurentPoly1& p) {
  FreeEnergy f;
  f.value = 0.5 * jensen_mean(p, 1.0);
  for (int l : {2, 4, 8, 16}) {
    double acc = 0.0;
    for (int j = 0; j < 2 * l; ++j) acc += std::log(std::abs(p(std::polar(1.0, kPi * (2 * j + 1) / (2 * l)))));
    f.riemann.emplace_back(l, acc / (4.0 * l));
  }
  return f;
}

}  // namespace fisher
