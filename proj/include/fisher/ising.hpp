#pragma once

// Periodic ferromagnetic Ising models on the triangular lattice and their
// Fisher-graph dimer counterparts: weights, the spin -> dimer map, sector
// bookkeeping and the critical inverse temperature.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fisher/kasteleyn.hpp"
#include "fisher/lattice.hpp"
#include "fisher/spectral.hpp"

namespace fisher {

// Spins sit on the hexagons of the honeycomb, one per cell: spin (x,y) has
// index y*m + x. Bond dir 0 joins (x,y)-(x+1,y), dir 1 joins (x,y)-(x,y+1),
// dir 2 joins (x,y)-(x-1,y+1), all mod (m,n). The Fisher connector crossing
// them is c(x+1,y-1), b(x,y) and a(x,y) respectively.
struct IsingSpec {
  int m = 1;
  int n = 1;
  double beta = 1.0;
  std::vector<double> J;  // 3*m*n, index (y*m + x)*3 + dir; all > 0

  static IsingSpec uniform(int m, int n, double J = 1.0, double beta = 1.0);
  double coupling(int x, int y, int dir) const;
  void set_coupling(int x, int y, int dir, double J);
  void validate() const;  // throws std::invalid_argument
  IsingSpec with_beta(double b) const;
};

// The connector dual to a bond, and the two spins a connector separates.
WeightKey connector_of_bond(int m, int n, int x, int y, int dir);
std::pair<int, int> spins_across(const FisherGraph& g, int e);

// Torus Fisher graph with triangle edges 1 and connector weights
// exp(2 beta J). Odd periods are refused unless for_duality is false.
FisherGraph to_fisher_graph(const IsingSpec& spec, bool for_duality = true);
// The same graph after parity normalization (a no-op when every weight is
// at least 1, which is the ferromagnetic case).
ParityNormalization to_fisher_weights(const IsingSpec& spec, bool for_duality = true);

// Generalized correspondence: connectors with weight > 1 are occupied when
// their spins agree, those with weight < 1 when they differ; triangles are
// then completed. Returns the occupied edges, or nothing if the result is
// not a perfect matching.
std::optional<std::vector<bool>> dimers_from_spins(const FisherGraph& g, const std::vector<int>& spins);

// exp(beta sum J s_u s_v).
double ising_weight(const IsingSpec& spec, const std::vector<int>& spins);

struct DualityReport {
  FourPfaffians pf{};       // Pf K at z = (-1)^theta, w = (-1)^tau
  FourPfaffians sectors{};  // Z_{theta tau} from the 4x4 system
  bool positivity_ok = false;  // Pf at the three non-(1,1) points > 0
  bool z00_max = false;
  bool consistent = true;      // every sector sum came out >= -1e-8 scale
};

DualityReport duality_report(const FisherGraph& g, const Orientation& o);

// Z_Ising = 2 prod exp(-beta J) Z_{F,D00}, even periods only.
double ising_partition_from_dimers(const IsingSpec& spec);

struct CriticalResult {
  double beta = 0.0;
  int z_sign = 1;  // Pfaffian whose sign changes: z = z_sign, w = w_sign
  int w_sign = 1;
  int iterations = 0;
  SpectralReport at_critical;
  SpectralReport below;  // beta_c - 0.05
  SpectralReport above;  // beta_c + 0.05
  bool validated = false;
};

// Bisection on the one Pfaffian among the four real points that changes
// sign across the bracket. Throws if none does.
CriticalResult critical_beta(const IsingSpec& spec, double lo, double hi, int grid = 64);

struct PositivityReport {
  double min_value = 0.0;
  double max_abs = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  bool ok = false;  // min >= -neg_tol * max
};

PositivityReport positivity_check(const LaurentPoly2& p, int grid, double neg_tol = 1e-8);

// min over theta of P(e^{i theta}, w_sign) (w_fixed) or P(z_sign, e^{i theta}).
struct SliceMin {
  double min_value = 0.0;
  double theta = 0.0;
};
SliceMin slice_min_w(const LaurentPoly2& p, int w_sign, int grid);
SliceMin slice_min_z(const LaurentPoly2& p, int z_sign, int grid);

}  // namespace fisher
