#pragma once

// Dense Laurent polynomials with real coefficients.

#include <complex>
#include <vector>

namespace fisher {

// sum_{|j| <= bound} c_j z^j
class LaurentPoly1 {
 public:
  LaurentPoly1() = default;
  explicit LaurentPoly1(int bound) : bound_(bound), c_(static_cast<std::size_t>(2 * bound + 1), 0.0) {}

  int bound() const { return bound_; }
  double coeff(int j) const;
  void set(int j, double v);
  // Winding coefficient: P(z) = P_0 + sum_{j>=1} P_j (z^j + z^-j) when P is
  // palindromic.
  double winding(int j) const { return coeff(j); }
  std::complex<double> operator()(std::complex<double> z) const;
  // Value and first two derivatives in theta of P(e^{i theta}).
  std::complex<double> dtheta(double theta, int order) const;
  double max_abs() const;
  // max |c_j - c_{-j}|.
  double asymmetry() const;
  // Drop trailing zero shells.
  LaurentPoly1 trimmed() const;
  // Coefficients of z^bound P(z) from lowest to highest degree.
  std::vector<double> shifted() const { return c_; }

 private:
  int bound_ = 0;
  std::vector<double> c_;
};

// sum_{|i| <= mb, |j| <= nb} c_ij z^i w^j
class LaurentPoly2 {
 public:
  LaurentPoly2() = default;
  LaurentPoly2(int mbound, int nbound)
      : mb_(mbound), nb_(nbound), c_(static_cast<std::size_t>((2 * mbound + 1) * (2 * nbound + 1)), 0.0) {}

  int mbound() const { return mb_; }
  int nbound() const { return nb_; }
  double coeff(int i, int j) const;
  void set(int i, int j, double v);
  std::complex<double> operator()(std::complex<double> z, std::complex<double> w) const;
  // Partial derivatives in (theta, phi) of P(e^{i theta}, e^{i phi}).
  std::complex<double> d(double theta, double phi, int ord_theta, int ord_phi) const;
  // P(z, w) as a polynomial in w for fixed z: coefficient of w^j.
  std::vector<std::complex<double>> slice_in_w(std::complex<double> z) const;
  double max_abs() const;
  // max |c_ij - c_{-i,-j}|.
  double asymmetry() const;
  LaurentPoly2 trimmed() const;

  struct Term {
    int i;
    int j;
    double c;
  };
  // Nonzero terms in (i, j) lexicographic order.
  std::vector<Term> terms() const;
  static LaurentPoly2 from_terms(const std::vector<Term>& t);

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>((j + nb_) * (2 * mb_ + 1) + (i + mb_));
  }
  int mb_ = 0;
  int nb_ = 0;
  std::vector<double> c_;
};

// Roots of sum_k c[k] x^k via the companion matrix. Leading coefficients
// below rel_tol * max|c| are dropped first.
std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> c, double rel_tol = 1e-14);

// Support inside the hexagon with vertices (+-m,0), (0,+-n), (+-m,-+n).
bool in_newton_hexagon(int i, int j, int m, int n);

}  // namespace fisher
