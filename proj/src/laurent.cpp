#include "fisher/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace fisher {

using cplx = std::complex<double>;

double LaurentPoly1::coeff(int j) const {
  if (std::abs(j) > bound_) return 0.0;
  return c_[static_cast<std::size_t>(j + bound_)];
}

void LaurentPoly1::set(int j, double v) {
  if (std::abs(j) > bound_) throw std::out_of_range("exponent outside polynomial support");
  c_[static_cast<std::size_t>(j + bound_)] = v;
}

cplx LaurentPoly1::operator()(cplx z) const {
  if (z == 0.0) throw std::invalid_argument("Laurent polynomial evaluated at 0");
  // Horner in z on z^bound P(z).
  cplx acc = 0.0;
  for (int k = 2 * bound_; k >= 0; --k) acc = acc * z + c_[static_cast<std::size_t>(k)];
  return acc * std::pow(z, -bound_);
}

cplx LaurentPoly1::dtheta(double theta, int order) const {
  cplx acc = 0.0;
  for (int j = -bound_; j <= bound_; ++j) {
    double c = coeff(j);
    if (c == 0.0) continue;
    cplx f = std::pow(cplx(0.0, static_cast<double>(j)), order);
    acc += c * f * std::polar(1.0, j * theta);
  }
  return acc;
}

double LaurentPoly1::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

double LaurentPoly1::asymmetry() const {
  double m = 0.0;
  for (int j = 1; j <= bound_; ++j) m = std::max(m, std::abs(coeff(j) - coeff(-j)));
  return m;
}

LaurentPoly1 LaurentPoly1::trimmed() const {
  int b = bound_;
  while (b > 0 && coeff(b) == 0.0 && coeff(-b) == 0.0) --b;
  LaurentPoly1 r(b);
  for (int j = -b; j <= b; ++j) r.set(j, coeff(j));
  return r;
}

double LaurentPoly2::coeff(int i, int j) const {
  if (std::abs(i) > mb_ || std::abs(j) > nb_) return 0.0;
  return c_[idx(i, j)];
}

void LaurentPoly2::set(int i, int j, double v) {
  if (std::abs(i) > mb_ || std::abs(j) > nb_) throw std::out_of_range("exponent outside polynomial support");
  c_[idx(i, j)] = v;
}

cplx LaurentPoly2::operator()(cplx z, cplx w) const {
  if (z == 0.0 || w == 0.0) throw std::invalid_argument("Laurent polynomial evaluated at 0");
  cplx acc = 0.0;
  for (int j = nb_; j >= -nb_; --j) {
    cplx row = 0.0;
    for (int i = mb_; i >= -mb_; --i) row = row * z + c_[idx(i, j)];
    acc = acc * w + row * std::pow(z, -mb_);
  }
  return acc * std::pow(w, -nb_);
}

cplx LaurentPoly2::d(double theta, double phi, int ot, int op) const {
  cplx acc = 0.0;
  for (int j = -nb_; j <= nb_; ++j)
    for (int i = -mb_; i <= mb_; ++i) {
      double c = c_[idx(i, j)];
      if (c == 0.0) continue;
      cplx f = std::pow(cplx(0.0, static_cast<double>(i)), ot) * std::pow(cplx(0.0, static_cast<double>(j)), op);
      acc += c * f * std::polar(1.0, i * theta + j * phi);
    }
  return acc;
}

std::vector<cplx> LaurentPoly2::slice_in_w(cplx z) const {
  std::vector<cplx> out(static_cast<std::size_t>(2 * nb_ + 1));
  for (int j = -nb_; j <= nb_; ++j) {
    cplx row = 0.0;
    for (int i = mb_; i >= -mb_; --i) row = row * z + c_[idx(i, j)];
    out[static_cast<std::size_t>(j + nb_)] = row * std::pow(z, -mb_);
  }
  return out;
}

double LaurentPoly2::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

double LaurentPoly2::asymmetry() const {
  double m = 0.0;
  for (int j = -nb_; j <= nb_; ++j)
    for (int i = -mb_; i <= mb_; ++i) m = std::max(m, std::abs(coeff(i, j) - coeff(-i, -j)));
  return m;
}

LaurentPoly2 LaurentPoly2::trimmed() const {
  int mb = 0, nb = 0;
  for (int j = -nb_; j <= nb_; ++j)
    for (int i = -mb_; i <= mb_; ++i)
      if (coeff(i, j) != 0.0) {
        mb = std::max(mb, std::abs(i));
        nb = std::max(nb, std::abs(j));
      }
  LaurentPoly2 r(mb, nb);
  for (int j = -nb; j <= nb; ++j)
    for (int i = -mb; i <= mb; ++i) r.set(i, j, coeff(i, j));
  return r;
}

std::vector<LaurentPoly2::Term> LaurentPoly2::terms() const {
  std::vector<Term> t;
  for (int i = -mb_; i <= mb_; ++i)
    for (int j = -nb_; j <= nb_; ++j)
      if (coeff(i, j) != 0.0) t.push_back({i, j, coeff(i, j)});
  return t;
}

LaurentPoly2 LaurentPoly2::from_terms(const std::vector<Term>& t) {
  int mb = 0, nb = 0;
  for (const Term& x : t) {
    mb = std::max(mb, std::abs(x.i));
    nb = std::max(nb, std::abs(x.j));
  }
  LaurentPoly2 p(mb, nb);
  for (const Term& x : t) p.set(x.i, x.j, p.coeff(x.i, x.j) + x.c);
  return p;
}

std::vector<cplx> polynomial_roots(std::vector<cplx> c, double rel_tol) {
  double mx = 0.0;
  for (const cplx& v : c) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) throw std::invalid_argument("roots of the zero polynomial");
  while (!c.empty() && std::abs(c.back()) <= rel_tol * mx) c.pop_back();
  // Zero roots from vanishing low coefficients.
  std::vector<cplx> roots;
  std::size_t lo = 0;
  while (lo < c.size() && std::abs(c[lo]) <= rel_tol * mx) {
    roots.push_back(0.0);
    ++lo;
  }
  const Eigen::Index d = static_cast<Eigen::Index>(c.size() - lo) - 1;
  if (d <= 0) return roots;
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 1; i < d; ++i) C(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < d; ++i) C(i, d - 1) = -c[lo + static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("companion eigenvalue solver did not converge");
  for (Eigen::Index i = 0; i < d; ++i) roots.push_back(es.eigenvalues()(i));
  return roots;
}

bool in_newton_hexagon(int i, int j, int m, int n) {
  return std::abs(i) <= m && std::abs(j) <= n && std::abs(n * i + m * j) <= m * n;
}

}  // namespace fisher
