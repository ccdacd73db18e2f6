#pragma once

// Where the spectral curve P = 0 meets the unit circle / unit torus, and
// related diagnostics: node multiplicity, eigenvalue split, the Jensen
// slope jump and intersection counts with other tori.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fisher/kasteleyn.hpp"
#include "fisher/laurent.hpp"

namespace fisher {

struct SpectralOptions {
  double zero_tol = 1e-6;      // |P| <= zero_tol * max declares a zero
  double confirm_tol = 1e-10;  // refinement must reach this, else "suspicious"
  double neg_tol = 1e-8;       // torus: min P >= -neg_tol * max
  double real_tol = 1e-6;      // angle distance to 0 or pi counted as real
};

struct NodeEvidence {
  double p = 0.0;
  // Circle: grad[0] = dP/dtheta, hess[0][0] = d2P/dtheta2.
  // Torus: gradient and Hessian in (theta, phi).
  std::array<double, 2> grad{};
  std::array<std::array<double, 2>, 2> hess{};
  bool stationary = false;   // |grad| <= 1e-8 scale
  bool double_node = false;  // second derivative (or Hessian) nondegenerate
};

struct SpectralReport {
  std::string mode;
  std::string verdict = "empty";  // empty | single-real | violation
  bool intersects = false;
  std::string location = "none";
  std::vector<std::array<double, 2>> zeros;       // angles of confirmed zeros
  std::vector<std::array<double, 2>> suspicious;  // dips that failed refinement
  double min_value = 0.0;
  double max_value = 0.0;
  double min_offcritical = 0.0;
  bool negative_violation = false;
  std::optional<NodeEvidence> evidence;
  // Circle: (theta, |P|). Torus: (theta, phi, P).
  std::vector<std::array<double, 3>> samples;
};

SpectralReport scan_unit_circle(const LaurentPoly1& p, int grid, const SpectralOptions& opt = {});
SpectralReport scan_unit_torus(const LaurentPoly2& p, int grid, const SpectralOptions& opt = {});

// Derivatives in theta of P(e^{i theta}) at z = at (+1 or -1). Throws if
// |P(at)| exceeds zero_tol times the coefficient scale.
NodeEvidence node_analysis(const LaurentPoly1& p, int at, const SpectralOptions& opt = {});
NodeEvidence node_analysis(const LaurentPoly2& p, int z_at, int w_at, const SpectralOptions& opt = {});

struct EigenSplit {
  int pos = 0;
  int neg = 0;
  int zero = 0;
};

// Signs of the eigenvalues of the Hermitian matrix i K(z), |z| = 1, z not real.
EigenSplit eigen_split(const KasteleynOperator& K, cplx z);

struct JensenProfile {
  std::vector<std::array<double, 2>> values;  // (r, F(r))
  double left = 0.0;                          // dF/dr at 1-
  double right = 0.0;                         // dF/dr at 1+
  double jump = 0.0;
  bool node_on_circle = false;
};

// F(r) = (1/2pi) int log|P(r e^{i theta})| d theta.
double jensen_mean(const LaurentPoly1& p, double r);
// Same value from the roots: log|lead| + sum log max(r, |root|) - bound log r.
double jensen_mean_from_roots(const LaurentPoly1& p, double r);
JensenProfile jensen_profile(const LaurentPoly1& p, const std::vector<double>& radii);

// Number of points, with multiplicity, where P = 0 meets
// {|z| = x, |w| = y}.
int harnack_count(const LaurentPoly2& p, double x, double y, int grid);

}  // namespace fisher
