#pragma once

// Characteristic polynomials P(z,w) = det K(z,w) (torus) and
// P(z) = det K(z) (cylinder), recovered by interpolation on roots of unity.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fisher/kasteleyn.hpp"
#include "fisher/laurent.hpp"
#include "fisher/lattice.hpp"

namespace fisher {

class InterpolationError : public std::runtime_error {
 public:
  InterpolationError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Degree bounds: z enters once per edge of E_H (one per row), w once per
// edge of E_V (one per column).
int z_degree_bound(const FisherGraph& g);
int w_degree_bound(const FisherGraph& g);

// Imaginary parts and coefficients outside the Newton hexagon must stay
// below coeff_tol * max|c|; they are then zeroed.
LaurentPoly2 charpoly_torus(const FisherGraph& g, const Orientation& o, double coeff_tol = 1e-9);
LaurentPoly1 charpoly_cylinder(const FisherGraph& g, const Orientation& o, double coeff_tol = 1e-9);

struct EnlargementReport {
  bool ok = true;
  double max_rel_err = 0.0;
  std::complex<double> z_witness{1.0, 0.0};
  std::complex<double> w_witness{1.0, 0.0};
};

// Compares pkl(z,w) with prod_{u^k=z} prod_{v^l=w} p1(u,v) at random
// unit-modulus points.
EnlargementReport verify_enlargement(const LaurentPoly2& p1, const LaurentPoly2& pkl, int k, int l, int trials,
                                     std::uint64_t seed, double tol = 1e-8);
EnlargementReport verify_enlargement(const LaurentPoly1& p1, const LaurentPoly1& pk, int k, int trials,
                                     std::uint64_t seed, double tol = 1e-8);

// Block data of a 1 x n torus where each block i carries six triangle-edge
// weights and unit connectors.
struct TransferBlock {
  double a1 = 1, b1 = 1, c1 = 1, a2 = 1, b2 = 1, c2 = 1;
};

// Closed form P = P_1 + P_{0,2}: the single-winding part plus the transfer
// sum over blocks whose horizontal edges are empty or doubled.
LaurentPoly2 transfer_sum_poly(const std::vector<TransferBlock>& blocks);

// The matching graph: block i is cell (i, 0) of an n x 1 torus, with
// a1 b1 c1 on the A-triangle sides opposite A0 A1 A2 and a2 b2 c2 on the
// B-triangle sides opposite B0 B1 B2. Under the canonical orientation its
// characteristic polynomial P satisfies
//   transfer_sum_poly(z, w) = P((-1)^n z, -w).
FisherGraph transfer_block_graph(const std::vector<TransferBlock>& blocks);

}  // namespace fisher
