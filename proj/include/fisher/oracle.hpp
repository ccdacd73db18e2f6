#pragma once

// Brute-force ground truth for small instances. Nothing here goes through
// the Kasteleyn machinery except where a comparison needs it.

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fisher/ising.hpp"
#include "fisher/laurent.hpp"
#include "fisher/lattice.hpp"

namespace fisher::oracle {

using rational = boost::multiprecision::cpp_rational;

struct MatchingList {
  std::vector<std::vector<int>> matchings;  // edge ids, sorted
  std::vector<double> weights;
  std::vector<std::array<int, 2>> sectors;  // parities of E_H and E_V edges used
  double total = 0.0;
  std::array<std::array<double, 2>, 2> sector_totals{};
  rational exact_total = 0;
};

inline constexpr int kMaxMatchingVertices = 40;
inline constexpr int kMaxSymbolicVertices = 16;

MatchingList enumerate_matchings(const FisherGraph& g);

// det K(z,w) with exact rational coefficients, K read straight off the
// graph and the orientation.
using ExactPoly = std::map<std::pair<int, int>, rational>;
ExactPoly symbolic_charpoly_exact(const FisherGraph& g, const Orientation& o);
LaurentPoly2 symbolic_charpoly_small(const FisherGraph& g, const Orientation& o);

struct SpinEnumeration {
  double Z_ising = 0.0;
  long configurations = 0;
  long distinct_images = 0;
  bool all_matchings = true;  // every image is a perfect matching
  bool two_to_one = true;     // every image has exactly the preimages s and -s
  std::array<std::array<double, 2>, 2> image_sector_totals{};  // dimer weights of the images by sector
};

inline constexpr int kMaxSpins = 20;

SpinEnumeration enumerate_spins(const IsingSpec& spec);

// Critical beta of the uniform model on an m x n domain from the matching
// sector polynomials alone: the root x > 1 of Z_top(x) = sum of the other
// three, where x = exp(2 beta J) and Z_top is the sector of highest degree.
// The root is isolated by exact rational bisection.
double uniform_critical_beta(int m, int n, double J = 1.0);

struct Check {
  std::string name;
  bool ok = false;
  double expected = 0.0;
  double got = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;
  bool all_ok() const;
};

// Every cross-check that applies at this size.
VerifyReport verify(const FisherGraph& g);

}  // namespace fisher::oracle
