#pragma once

// Kasteleyn operators K(z,w) of a Fisher graph, their sign variants, and
// Pfaffian formulas for partition functions and edge marginals.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "fisher/lattice.hpp"

namespace fisher {

using cplx = std::complex<double>;

struct KEntry {
  int row = 0;
  int col = 0;
  double weight = 0.0;  // signed
  int zpow = 0;
  int wpow = 0;
};

struct KasteleynOperator {
  int order = 0;
  int theta = 0;
  int tau = 0;
  std::vector<KEntry> entries;  // both (u,v) and (v,u) for every edge
};

// K_{uv} = +W(uv) if u -> v, -W(uv) otherwise. E_H entries carry z^{+-1}
// and (-1)^theta, E_V entries carry w^{+-1} and (-1)^tau.
KasteleynOperator assemble(const FisherGraph& g, const Orientation& o, int theta = 0, int tau = 0);

Eigen::MatrixXcd evaluate(const KasteleynOperator& K, cplx z, cplx w = 1.0);
// Real evaluation at z, w in {+1, -1}; the result is antisymmetric.
Eigen::MatrixXd evaluate_real(const KasteleynOperator& K, int z_sign, int w_sign = 1);

cplx determinant(const Eigen::MatrixXcd& M);

// Pfaffian by Householder skew reduction. Throws on odd order or when
// max|M + M^T| exceeds 1e-12 max|M|.
double pfaffian(const Eigen::MatrixXd& M);

// Pf K^{theta tau} for theta, tau in {0,1}, indexed [theta][tau].
using FourPfaffians = std::array<std::array<double, 2>, 2>;
FourPfaffians four_pfaffians(const FisherGraph& g, const Orientation& o);
FourPfaffians four_pfaffians(const FisherGraph& g, const Orientation& o, const std::vector<int>& removed);

// s_{ab} Z_{ab}, where Z_{ab} sums the matchings using a (mod 2) edges of
// E_H and b edges of E_V, and s_{ab} = +-1 is the sign the orientation gives
// that class. Obtained by inverting the four Pfaffians.
FourPfaffians sector_sums(const FourPfaffians& pf);

double partition_function_torus(const FisherGraph& g, const Orientation& o);
double partition_function_cylinder(const FisherGraph& g, const Orientation& o);

// Joint probability that all the given (vertex disjoint) edges are matched.
double edge_probability_torus(const FisherGraph& g, const Orientation& o, const std::vector<int>& edges);
double edge_probability_cylinder(const FisherGraph& g, const Orientation& o, const std::vector<int>& edges);

// Rows/columns of M kept after deleting the listed indices.
Eigen::MatrixXd delete_indices(const Eigen::MatrixXd& M, const std::vector<int>& removed);

}  // namespace fisher
