#include "fisher/kasteleyn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fisher {

KasteleynOperator assemble(const FisherGraph& g, const Orientation& o, int theta, int tau) {
  if (o.size() != g.num_edges()) throw std::invalid_argument("orientation does not cover every edge");
  if ((theta != 0 && theta != 1) || (tau != 0 && tau != 1)) throw std::invalid_argument("theta and tau must be 0 or 1");
  KasteleynOperator K;
  K.order = g.num_vertices();
  K.theta = theta;
  K.tau = tau;
  K.entries.reserve(static_cast<std::size_t>(2 * g.num_edges()));
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    double w = o.forward[static_cast<std::size_t>(e)] ? ed.weight : -ed.weight;
    if (ed.hx != 0 && theta) w = -w;
    if (ed.hy != 0 && tau) w = -w;
    K.entries.push_back({ed.u, ed.v, w, ed.hx, ed.hy});
    K.entries.push_back({ed.v, ed.u, -w, -ed.hx, -ed.hy});
  }
  return K;
}

namespace {
cplx ipow(cplx z, int k) {
  if (k == 0) return 1.0;
  if (k == 1) return z;
  if (k == -1) return 1.0 / z;
  return std::pow(z, k);
}
}  // namespace

Eigen::MatrixXcd evaluate(const KasteleynOperator& K, cplx z, cplx w) {
  if (z == 0.0 || w == 0.0) throw std::invalid_argument("K(z,w) needs nonzero z and w");
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(K.order, K.order);
  for (const KEntry& e : K.entries) M(e.row, e.col) += e.weight * ipow(z, e.zpow) * ipow(w, e.wpow);
  return M;
}

Eigen::MatrixXd evaluate_real(const KasteleynOperator& K, int z_sign, int w_sign) {
  if (std::abs(z_sign) != 1 || std::abs(w_sign) != 1) throw std::invalid_argument("real evaluation needs z, w = +-1");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(K.order, K.order);
  for (const KEntry& e : K.entries) {
    double s = e.weight;
    if (e.zpow % 2 != 0 && z_sign < 0) s = -s;
    if (e.wpow % 2 != 0 && w_sign < 0) s = -s;
    M(e.row, e.col) += s;
  }
  return M;
}

cplx determinant(const Eigen::MatrixXcd& M) {
  if (M.rows() == 0) return 1.0;
  return M.partialPivLu().determinant();
}

double pfaffian(const Eigen::MatrixXd& M0) {
  const Eigen::Index n = M0.rows();
  if (M0.cols() != n) throw std::invalid_argument("Pfaffian needs a square matrix");
  if (n % 2 != 0) throw std::invalid_argument("Pfaffian needs even order");
  if (n == 0) return 1.0;
  double scale = M0.cwiseAbs().maxCoeff();
  if ((M0 + M0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("Pfaffian needs an antisymmetric matrix");
  if (scale == 0.0) return 0.0;
  Eigen::MatrixXd A = M0;
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    const Eigen::Index L = n - k - 1;
    Eigen::VectorXd x = A.col(k).tail(L);
    double tail = L > 1 ? x.tail(L - 1).squaredNorm() : 0.0;
    if (tail > 0.0) {
      double norm = std::sqrt(x(0) * x(0) + tail);
      double alpha = x(0) > 0 ? -norm : norm;
      Eigen::VectorXd v = x;
      v(0) -= alpha;
      double beta = 2.0 / v.squaredNorm();
      // S <- H S H with H = I - beta v v^T
      auto S = A.bottomRightCorner(L, L);
      Eigen::VectorXd Sv = S * v;
      Eigen::RowVectorXd vS = v.transpose() * S;
      double vSv = v.dot(Sv);
      S.noalias() -= beta * v * vS;
      S.noalias() -= beta * Sv * v.transpose();
      S.noalias() += (beta * beta * vSv) * v * v.transpose();
      A.col(k).tail(L).setZero();
      A.row(k).tail(L).setZero();
      A(k + 1, k) = alpha;
      A(k, k + 1) = -alpha;
      pf = -pf;  // det H = -1
    }
    pf *= A(k, k + 1);
    if (pf == 0.0) return 0.0;
  }
  return pf;
}

Eigen::MatrixXd delete_indices(const Eigen::MatrixXd& M, const std::vector<int>& removed) {
  std::vector<bool> gone(static_cast<std::size_t>(M.rows()), false);
  for (int r : removed) {
    if (r < 0 || r >= M.rows()) throw std::out_of_range("index outside matrix");
    gone[static_cast<std::size_t>(r)] = true;
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    if (!gone[static_cast<std::size_t>(i)]) keep.push_back(i);
  Eigen::MatrixXd S(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j)
      S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = M(keep[i], keep[j]);
  return S;
}

FourPfaffians four_pfaffians(const FisherGraph& g, const Orientation& o, const std::vector<int>& removed) {
  if (g.topology() != Topology::Torus) throw std::invalid_argument("four Pfaffians need a torus");
  KasteleynOperator K = assemble(g, o);
  FourPfaffians pf{};
  for (int th = 0; th < 2; ++th)
    for (int ta = 0; ta < 2; ++ta)
      pf[static_cast<std::size_t>(th)][static_cast<std::size_t>(ta)] =
          pfaffian(delete_indices(evaluate_real(K, th ? -1 : 1, ta ? -1 : 1), removed));
  return pf;
}

FourPfaffians four_pfaffians(const FisherGraph& g, const Orientation& o) { return four_pfaffians(g, o, {}); }

FourPfaffians sector_sums(const FourPfaffians& pf) {
  FourPfaffians s{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double acc = 0.0;
      for (int th = 0; th < 2; ++th)
        for (int ta = 0; ta < 2; ++ta)
          acc += ((th * a + ta * b) % 2 ? -1.0 : 1.0) * pf[static_cast<std::size_t>(th)][static_cast<std::size_t>(ta)];
      s[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 0.25 * acc;
    }
  return s;
}

namespace {
double four_term(const FourPfaffians& p) { return 0.5 * std::abs(-p[0][0] + p[1][0] + p[0][1] + p[1][1]); }

std::vector<int> endpoints(const FisherGraph& g, const std::vector<int>& edges, double& weight) {
  std::vector<int> vs;
  weight = 1.0;
  for (int e : edges) {
    if (e < 0 || e >= g.num_edges()) throw std::out_of_range("edge index out of range");
    vs.push_back(g.edge(e).u);
    vs.push_back(g.edge(e).v);
    weight *= g.edge(e).weight;
  }
  auto sorted = vs;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("edges must be vertex disjoint");
  return vs;
}
}  // namespace

double partition_function_torus(const FisherGraph& g, const Orientation& o) { return four_term(four_pfaffians(g, o)); }

double partition_function_cylinder(const FisherGraph& g, const Orientation& o) {
  if (g.topology() != Topology::Cylinder) throw std::invalid_argument("expected a cylinder");
  return std::abs(pfaffian(evaluate_real(assemble(g, o), -1)));
}

double edge_probability_torus(const FisherGraph& g, const Orientation& o, const std::vector<int>& edges) {
  double w = 1.0;
  auto vs = endpoints(g, edges, w);
  double Z = partition_function_torus(g, o);
  return w * four_term(four_pfaffians(g, o, vs)) / Z;
}

double edge_probability_cylinder(const FisherGraph& g, const Orientation& o, const std::vector<int>& edges) {
  double w = 1.0;
  auto vs = endpoints(g, edges, w);
  Eigen::MatrixXd K = evaluate_real(assemble(g, o), -1);
  double Z = std::abs(pfaffian(K));
  return w * std::abs(pfaffian(delete_indices(K, vs))) / Z;
}

}  // namespace fisher
