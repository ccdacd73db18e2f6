#include "fisher/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fisher/parallel.hpp"

namespace fisher {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0 ? t + kTwoPi : t;
}

double angle_dist(double a, double b) {
  double d = std::abs(wrap(a) - wrap(b));
  return std::min(d, kTwoPi - d);
}

// Distance to the nearer of 0 and pi, and which one.
double real_dist(double t, int& which) {
  double d0 = angle_dist(t, 0.0), d1 = angle_dist(t, std::numbers::pi);
  which = d0 <= d1 ? 1 : -1;
  return std::min(d0, d1);
}

double coeff_scale(const LaurentPoly1& p) {
  double s = 0.0;
  for (int j = -p.bound(); j <= p.bound(); ++j) s += std::abs(p.coeff(j));
  return s;
}

double coeff_scale(const LaurentPoly2& p) {
  double s = 0.0;
  for (const auto& t : p.terms()) s += std::abs(t.c);
  return s;
}

double P1(const LaurentPoly1& p, double t) { return p.dtheta(t, 0).real(); }
double P1d(const LaurentPoly1& p, double t) { return p.dtheta(t, 1).real(); }
double P1dd(const LaurentPoly1& p, double t) { return p.dtheta(t, 2).real(); }

// Root of f in [a, b] given a sign change; safeguarded secant/bisection.
template <class F>
double bracket_root(F f, double a, double b) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  for (int it = 0; it < 200 && std::abs(b - a) > 1e-15; ++it) {
    double m = 0.5 * (a + b);
    double s = (fb - fa) != 0.0 ? b - fb * (b - a) / (fb - fa) : m;
    if (!(s > std::min(a, b) && s < std::max(a, b)) || it % 3 == 2) s = m;
    double fs = f(s);
    if (fs == 0.0) return s;
    if ((fs < 0) == (fa < 0)) {
      a = s;
      fa = fs;
    } else {
      b = s;
      fb = fs;
    }
  }
  return 0.5 * (a + b);
}

void classify(SpectralReport& r, int dims, const SpectralOptions& opt) {
  if (r.zeros.empty()) {
    r.verdict = "empty";
    r.location = "none";
    r.intersects = false;
    return;
  }
  r.intersects = true;
  bool all_real = true;
  for (const auto& z : r.zeros)
    for (int d = 0; d < dims; ++d) {
      int w;
      all_real = all_real && real_dist(z[static_cast<std::size_t>(d)], w) <= opt.real_tol;
    }
  if (!all_real) {
    r.verdict = "violation";
    r.location = "non-real";
    return;
  }
  if (r.zeros.size() > 1) {
    r.verdict = "violation";
    r.location = "multiple";
    return;
  }
  r.verdict = "single-real";
  int a, b;
  real_dist(r.zeros[0][0], a);
  if (dims == 1) {
    r.location = a > 0 ? "z=1" : "z=-1";
  } else {
    real_dist(r.zeros[0][1], b);
    r.location = std::string("(z,w)=(") + (a > 0 ? "1" : "-1") + "," + (b > 0 ? "1" : "-1") + ")";
  }
}

void add_zero(std::vector<std::array<double, 2>>& list, std::array<double, 2> z, int dims) {
  for (const auto& q : list) {
    bool same = true;
    for (int d = 0; d < dims; ++d) same = same && angle_dist(q[static_cast<std::size_t>(d)], z[static_cast<std::size_t>(d)]) < 1e-6;
    if (same) return;
  }
  list.push_back(z);
}

void snap(std::array<double, 2>& z, int dims, const SpectralOptions& opt) {
  for (int d = 0; d < dims; ++d) {
    int w;
    if (real_dist(z[static_cast<std::size_t>(d)], w) <= opt.real_tol) z[static_cast<std::size_t>(d)] = w > 0 ? 0.0 : std::numbers::pi;
  }
}

}  // namespace

SpectralReport scan_unit_circle(const LaurentPoly1& p, int grid, const SpectralOptions& opt) {
  if (p.max_abs() == 0.0) throw std::invalid_argument("degenerate all-zero polynomial");
  if (grid < std::max(8, 8 * p.bound())) throw std::invalid_argument("circle grid must be at least 4 times the degree");
  SpectralReport r;
  r.mode = "circle";
  const int N = grid;
  std::vector<double> v(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) v[static_cast<std::size_t>(k)] = P1(p, kTwoPi * k / N);
  double maxv = 0.0, minv = std::numeric_limits<double>::infinity();
  for (int k = 0; k < N; ++k) {
    maxv = std::max(maxv, std::abs(v[static_cast<std::size_t>(k)]));
    minv = std::min(minv, v[static_cast<std::size_t>(k)]);
    r.samples.push_back({kTwoPi * k / N, std::abs(v[static_cast<std::size_t>(k)]), 0.0});
  }
  r.max_value = maxv;
  auto at = [&](int k) { return v[static_cast<std::size_t>(((k % N) + N) % N)]; };
  for (int k = 0; k < N; ++k) {
    double c = std::abs(at(k));
    if (c > std::abs(at(k - 1)) || c > std::abs(at(k + 1))) continue;
    double a = kTwoPi * (k - 1) / N, b = kTwoPi * (k + 1) / N, t = kTwoPi * k / N;
    if (at(k) == 0.0) {
      // exact
    } else if ((at(k - 1) < 0) != (at(k) < 0)) {
      t = bracket_root([&](double s) { return P1(p, s); }, a, t);
    } else if ((at(k + 1) < 0) != (at(k) < 0)) {
      t = bracket_root([&](double s) { return P1(p, s); }, t, b);
    } else {
      double da = P1d(p, a), db = P1d(p, b);
      if ((da < 0) != (db < 0)) t = bracket_root([&](double s) { return P1d(p, s); }, a, b);
    }
    double val = P1(p, t);
    minv = std::min(minv, val);
    if (std::abs(val) > opt.zero_tol * maxv) continue;
    std::array<double, 2> z{wrap(t), 0.0};
    snap(z, 1, opt);
    if (std::abs(P1(p, z[0])) <= opt.confirm_tol * maxv)
      add_zero(r.zeros, z, 1);
    else
      add_zero(r.suspicious, z, 1);
  }
  r.min_value = minv;
  classify(r, 1, opt);
  double off = std::numeric_limits<double>::infinity();
  for (int k = 0; k < N; ++k) {
    double t = kTwoPi * k / N;
    bool far = true;
    for (const auto& z : r.zeros) far = far && angle_dist(t, z[0]) > 10.0 * kTwoPi / N;
    if (far) off = std::min(off, std::abs(at(k)));
  }
  r.min_offcritical = off;
  if (r.verdict == "single-real") r.evidence = node_analysis(p, r.location == "z=1" ? 1 : -1, opt);
  return r;
}

NodeEvidence node_analysis(const LaurentPoly1& p, int at, const SpectralOptions& opt) {
  if (at != 1 && at != -1) throw std::invalid_argument("node must be at z = 1 or z = -1");
  double t = at > 0 ? 0.0 : std::numbers::pi;
  double scale = coeff_scale(p);
  NodeEvidence e;
  e.p = P1(p, t);
  if (std::abs(e.p) > opt.zero_tol * scale) throw std::domain_error("point is not on the spectral curve");
  e.grad[0] = P1d(p, t);
  e.hess[0][0] = P1dd(p, t);
  e.stationary = std::abs(e.grad[0]) <= 1e-8 * scale;
  e.double_node = std::abs(e.hess[0][0]) > 1e-6 * scale;
  return e;
}

NodeEvidence node_analysis(const LaurentPoly2& p, int z_at, int w_at, const SpectralOptions& opt) {
  if (std::abs(z_at) != 1 || std::abs(w_at) != 1) throw std::invalid_argument("node must be at a real point of the torus");
  double t = z_at > 0 ? 0.0 : std::numbers::pi, f = w_at > 0 ? 0.0 : std::numbers::pi;
  double scale = coeff_scale(p);
  NodeEvidence e;
  e.p = p.d(t, f, 0, 0).real();
  if (std::abs(e.p) > opt.zero_tol * scale) throw std::domain_error("point is not on the spectral curve");
  e.grad = {p.d(t, f, 1, 0).real(), p.d(t, f, 0, 1).real()};
  e.hess = {{{p.d(t, f, 2, 0).real(), p.d(t, f, 1, 1).real()}, {p.d(t, f, 1, 1).real(), p.d(t, f, 0, 2).real()}}};
  e.stationary = std::hypot(e.grad[0], e.grad[1]) <= 1e-8 * scale;
  Eigen::Matrix2d H;
  H << e.hess[0][0], e.hess[0][1], e.hess[1][0], e.hess[1][1];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H);
  e.double_node = es.eigenvalues().cwiseAbs().minCoeff() > 1e-6 * scale;
  return e;
}

namespace {

// Damped Newton for a stationary point of P on the torus, started at (t, f).
std::array<double, 2> torus_descend(const LaurentPoly2& p, double t, double f) {
  auto val = [&](double a, double b) { return p.d(a, b, 0, 0).real(); };
  double cur = val(t, f);
  for (int it = 0; it < 200; ++it) {
    Eigen::Vector2d g(p.d(t, f, 1, 0).real(), p.d(t, f, 0, 1).real());
    Eigen::Matrix2d H;
    double hxy = p.d(t, f, 1, 1).real();
    H << p.d(t, f, 2, 0).real(), hxy, hxy, p.d(t, f, 0, 2).real();
    Eigen::Vector2d step;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H);
    if (es.eigenvalues().minCoeff() > 0)
      step = -H.ldlt().solve(g);
    else
      step = -g / std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    double lam = 1.0;
    bool moved = false;
    for (int k = 0; k < 40; ++k) {
      double nt = t + lam * step(0), nf = f + lam * step(1);
      double nv = val(nt, nf);
      if (nv <= cur) {
        moved = std::abs(lam * step(0)) + std::abs(lam * step(1)) > 0;
        t = nt;
        f = nf;
        cur = nv;
        break;
      }
      lam *= 0.5;
    }
    if (!moved || lam * step.norm() < 1e-14) break;
  }
  return {wrap(t), wrap(f)};
}

}  // namespace

SpectralReport scan_unit_torus(const LaurentPoly2& p, int grid, const SpectralOptions& opt) {
  if (p.max_abs() == 0.0) throw std::invalid_argument("degenerate all-zero polynomial");
  if (grid < 8) throw std::invalid_argument("torus grid must be at least 8");
  SpectralReport r;
  r.mode = "torus";
  const int N = grid;
  std::vector<double> v(static_cast<std::size_t>(N * N));
  parallel_for(v.size(), [&](std::size_t q) {
    int a = static_cast<int>(q) % N, b = static_cast<int>(q) / N;
    v[q] = p.d(kTwoPi * a / N, kTwoPi * b / N, 0, 0).real();
  });
  auto at = [&](int a, int b) { return v[static_cast<std::size_t>(((b % N + N) % N) * N + ((a % N + N) % N))]; };
  double maxv = 0.0, minv = std::numeric_limits<double>::infinity();
  for (int b = 0; b < N; ++b)
    for (int a = 0; a < N; ++a) {
      maxv = std::max(maxv, std::abs(at(a, b)));
      minv = std::min(minv, at(a, b));
      r.samples.push_back({kTwoPi * a / N, kTwoPi * b / N, at(a, b)});
    }
  r.max_value = maxv;
  std::vector<std::array<double, 2>> seeds{{0.0, 0.0}, {std::numbers::pi, 0.0}, {0.0, std::numbers::pi}, {std::numbers::pi, std::numbers::pi}};
  for (int b = 0; b < N; ++b)
    for (int a = 0; a < N; ++a) {
      double c = at(a, b);
      bool is_min = true;
      for (int da = -1; da <= 1 && is_min; ++da)
        for (int db = -1; db <= 1; ++db)
          if ((da || db) && at(a + da, b + db) < c) {
            is_min = false;
            break;
          }
      if (is_min) seeds.push_back({kTwoPi * a / N, kTwoPi * b / N});
    }
  for (const auto& s : seeds) {
    auto z = torus_descend(p, s[0], s[1]);
    double val = p.d(z[0], z[1], 0, 0).real();
    minv = std::min(minv, val);
    if (std::abs(val) > opt.zero_tol * maxv) continue;
    snap(z, 2, opt);
    if (std::abs(p.d(z[0], z[1], 0, 0).real()) <= opt.confirm_tol * maxv)
      add_zero(r.zeros, z, 2);
    else
      add_zero(r.suspicious, z, 2);
  }
  r.min_value = minv;
  classify(r, 2, opt);
  if (minv < -opt.neg_tol * maxv) {
    r.negative_violation = true;
    r.verdict = "violation";
  }
  double off = std::numeric_limits<double>::infinity();
  for (int b = 0; b < N; ++b)
    for (int a = 0; a < N; ++a) {
      bool far = true;
      for (const auto& z : r.zeros)
        far = far && std::hypot(angle_dist(kTwoPi * a / N, z[0]), angle_dist(kTwoPi * b / N, z[1])) > 10.0 * kTwoPi / N;
      if (far) off = std::min(off, at(a, b));
    }
  r.min_offcritical = off;
  if (r.verdict == "single-real") {
    int a, b;
    real_dist(r.zeros[0][0], a);
    real_dist(r.zeros[0][1], b);
    r.evidence = node_analysis(p, a, b, opt);
  }
  return r;
}

EigenSplit eigen_split(const KasteleynOperator& K, cplx z) {
  for (const KEntry& e : K.entries)
    if (e.wpow != 0) throw std::invalid_argument("eigen split needs a cylinder operator");
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw std::invalid_argument("z must lie on the unit circle");
  if (std::abs(z.imag()) < 1e-12) throw std::invalid_argument("z must not be real");
  Eigen::MatrixXcd H = cplx(0.0, 1.0) * evaluate(K, z);
  double herm = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10 * std::max(1.0, H.cwiseAbs().maxCoeff())) throw std::runtime_error("i K(z) is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  double norm = ev.cwiseAbs().maxCoeff();
  EigenSplit s;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) < 1e-10 * norm)
      ++s.zero;
    else if (ev(i) > 0)
      ++s.pos;
    else
      ++s.neg;
  }
  return s;
}

namespace {

// Mean over N shifted nodes of log|P(r e^{i t})| minus the given log terms.
double mean_log(const LaurentPoly1& p, double r, int N, const std::vector<double>& nodes) {
  double acc = 0.0;
  const double h = kTwoPi / N;
  const double shift = nodes.empty() ? 0.0 : nodes.front();
  for (int k = 0; k < N; ++k) {
    double t = shift + (k + 0.5) * h;
    double v = std::log(std::abs(p(std::polar(r, t))));
    for (double z : nodes) v -= std::log(2.0 - 2.0 * std::cos(t - z));
    acc += v;
  }
  return acc / N;
}

}  // namespace

double jensen_mean(const LaurentPoly1& p, double r) {
  if (!(r > 0)) throw std::invalid_argument("radius must be positive");
  std::vector<double> nodes;
  if (std::abs(r - 1.0) < 1e-14) {
    SpectralReport s = scan_unit_circle(p, std::max(64, 16 * p.bound()));
    for (const auto& z : s.zeros) {
      // Each node must be a double root so |P| / |z - z0|^2 stays smooth;
      // the subtracted logs integrate to zero.
      if (std::abs(P1dd(p, z[0])) <= 1e-6 * coeff_scale(p))
        throw std::runtime_error("node of order greater than two on the unit circle");
      nodes.push_back(z[0]);
    }
  }
  double prev = mean_log(p, r, 2048, nodes);
  for (int N = 4096;; N *= 2) {
    double cur = mean_log(p, r, N, nodes);
    if (!std::isfinite(cur)) throw std::runtime_error("log|P| is singular on the requested circle");
    if (std::abs(cur - prev) <= 1e-13 * (1.0 + std::abs(cur))) return cur;
    if (N >= (1 << 22)) {
      if (std::abs(cur - prev) > 1e-4) throw std::runtime_error("Jensen quadrature did not converge");
      return cur;
    }
    prev = cur;
  }
}

double jensen_mean_from_roots(const LaurentPoly1& p, double r) {
  const int B = p.bound();
  std::vector<cplx> c;
  for (int j = -B; j <= B; ++j) c.push_back(p.coeff(j));
  int top = 2 * B;
  while (top >= 0 && c[static_cast<std::size_t>(top)] == 0.0) --top;
  if (top < 0) throw std::invalid_argument("degenerate all-zero polynomial");
  double F = std::log(std::abs(c[static_cast<std::size_t>(top)].real())) - B * std::log(r);
  for (const cplx& z : polynomial_roots(c, 0.0)) F += std::log(std::max(r, std::abs(z)));
  return F;
}

JensenProfile jensen_profile(const LaurentPoly1& p, const std::vector<double>& radii) {
  JensenProfile out;
  for (double r : radii) out.values.push_back({r, jensen_mean(p, r)});
  SpectralReport s = scan_unit_circle(p, std::max(64, 16 * p.bound()));
  out.node_on_circle = !s.zeros.empty();
  const double F1 = jensen_mean(p, 1.0);
  const double h1 = 1e-2, h2 = 1e-3;
  auto right = [&](double h) { return (jensen_mean(p, 1.0 + h) - F1) / h; };
  auto left = [&](double h) { return (F1 - jensen_mean(p, 1.0 - h)) / h; };
  // First-order one-sided differences, Richardson-extrapolated.
  out.right = (h1 * right(h2) - h2 * right(h1)) / (h1 - h2);
  out.left = (h1 * left(h2) - h2 * left(h1)) / (h1 - h2);
  out.jump = out.right - out.left;
  return out;
}

namespace {

struct PolyXY {
  std::vector<LaurentPoly2::Term> t;
  double x, y;
  // P(x e^{i a}, y e^{i b}) and its a- and b-derivatives.
  void eval(double a, double b, cplx& v, cplx& da, cplx& db) const {
    v = da = db = 0.0;
    for (const auto& q : t) {
      cplx m = q.c * std::pow(x, q.i) * std::pow(y, q.j) * std::polar(1.0, q.i * a + q.j * b);
      v += m;
      da += cplx(0.0, q.i) * m;
      db += cplx(0.0, q.j) * m;
    }
  }
};

}  // namespace

int harnack_count(const LaurentPoly2& p, double x, double y, int grid) {
  if (!(x > 0) || !(y > 0)) throw std::invalid_argument("torus radii must be positive");
  if (grid < 8) throw std::invalid_argument("grid must be at least 8");
  PolyXY f{p.terms(), x, y};
  double scale = 0.0;
  for (const auto& q : f.t) scale += std::abs(q.c) * std::pow(x, q.i) * std::pow(y, q.j);
  struct Hit {
    double a, b;
    int mult;
  };
  std::vector<Hit> hits;
  for (int k = 0; k < grid; ++k) {
    double a0 = kTwoPi * k / grid;
    auto coeffs = p.slice_in_w(std::polar(x, a0));
    bool zero_poly = true;
    for (const cplx& c : coeffs) zero_poly = zero_poly && std::abs(c) == 0.0;
    if (zero_poly) continue;
    for (const cplx& w : polynomial_roots(coeffs)) {
      if (std::abs(w) == 0.0 || std::abs(std::log(std::abs(w) / y)) > 0.5) continue;
      double a = a0, b = std::arg(w);
      cplx v, da, db;
      f.eval(a, b, v, da, db);
      for (int it = 0; it < 100 && std::abs(v) > 1e-14 * scale; ++it) {
        Eigen::Matrix2d J;
        J << da.real(), db.real(), da.imag(), db.imag();
        Eigen::Vector2d rhs(-v.real(), -v.imag());
        Eigen::Vector2d step = J.completeOrthogonalDecomposition().solve(rhs);
        double lam = 1.0;
        double cur = std::abs(v);
        for (int s = 0; s < 30; ++s) {
          cplx nv, nda, ndb;
          f.eval(a + lam * step(0), b + lam * step(1), nv, nda, ndb);
          if (std::abs(nv) < cur) {
            a += lam * step(0);
            b += lam * step(1);
            v = nv;
            da = nda;
            db = ndb;
            break;
          }
          lam *= 0.5;
        }
        if (lam * step.norm() < 1e-15 || std::abs(v) >= cur) break;
      }
      if (std::abs(v) > 1e-9 * scale) continue;
      a = wrap(a);
      b = wrap(b);
      bool dup = false;
      for (const Hit& h : hits) dup = dup || (angle_dist(h.a, a) < 1e-5 && angle_dist(h.b, b) < 1e-5);
      if (dup) continue;
      Eigen::Matrix2d J;
      J << da.real(), db.real(), da.imag(), db.imag();
      Eigen::JacobiSVD<Eigen::Matrix2d> svd(J);
      // A singular Jacobian means a node or a tangency: multiplicity two.
      int mult = svd.singularValues()(1) <= 1e-5 * scale ? 2 : 1;
      hits.push_back({a, b, mult});
    }
  }
  int count = 0;
  for (const Hit& h : hits) count += h.mult;
  return count;
}

}  // namespace fisher
