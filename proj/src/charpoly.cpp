#include "fisher/charpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fisher/parallel.hpp"

namespace fisher {

int z_degree_bound(const FisherGraph& g) {
  int k = 0;
  for (int e = 0; e < g.num_edges(); ++e) k += g.in_EH(e) ? 1 : 0;
  return k;
}

int w_degree_bound(const FisherGraph& g) {
  int k = 0;
  for (int e = 0; e < g.num_edges(); ++e) k += g.in_EV(e) ? 1 : 0;
  return k;
}

namespace {

cplx root_of_unity(int k, int N) { return std::polar(1.0, 2.0 * std::numbers::pi * k / N); }

}  // namespace

LaurentPoly2 charpoly_torus(const FisherGraph& g, const Orientation& o, double coeff_tol) {
  if (g.topology() != Topology::Torus) throw std::invalid_argument("charpoly_torus needs a torus");
  const int I = z_degree_bound(g), J = w_degree_bound(g);
  const int NZ = 2 * I + 1, NW = 2 * J + 1;
  KasteleynOperator K = assemble(g, o);
  std::vector<cplx> vals(static_cast<std::size_t>(NZ * NW));
  parallel_for(vals.size(), [&](std::size_t t) {
    int a = static_cast<int>(t) % NZ, b = static_cast<int>(t) / NZ;
    vals[t] = determinant(evaluate(K, root_of_unity(a, NZ), root_of_unity(b, NW)));
  });
  // Inverse DFT; the grid is wide enough that no aliasing occurs.
  std::vector<cplx> c(static_cast<std::size_t>(NZ * NW));
  double cmax = 0.0;
  for (int j = -J; j <= J; ++j)
    for (int i = -I; i <= I; ++i) {
      cplx acc = 0.0;
      for (int b = 0; b < NW; ++b)
        for (int a = 0; a < NZ; ++a)
          acc += vals[static_cast<std::size_t>(b * NZ + a)] * std::conj(root_of_unity(a * i, NZ) * root_of_unity(b * j, NW));
      acc /= static_cast<double>(NZ * NW);
      c[static_cast<std::size_t>((j + J) * NZ + (i + I))] = acc;
      cmax = std::max(cmax, std::abs(acc));
    }
  LaurentPoly2 p(I, J);
  double residual = 0.0;
  for (int j = -J; j <= J; ++j)
    for (int i = -I; i <= I; ++i) {
      cplx v = c[static_cast<std::size_t>((j + J) * NZ + (i + I))];
      residual = std::max(residual, std::abs(v.imag()));
      if (in_newton_hexagon(i, j, I, J))
        p.set(i, j, v.real());
      else
        residual = std::max(residual, std::abs(v.real()));
    }
  if (residual > coeff_tol * cmax)
    throw InterpolationError("charpoly interpolation residual " + std::to_string(residual / cmax) +
                                 " (relative) exceeds tolerance",
                             residual / cmax);
  for (int j = -J; j <= J; ++j)
    for (int i = -I; i <= I; ++i)
      if (std::abs(p.coeff(i, j)) <= coeff_tol * cmax) p.set(i, j, 0.0);
  return p;
}

LaurentPoly1 charpoly_cylinder(const FisherGraph& g, const Orientation& o, double coeff_tol) {
  if (g.topology() != Topology::Cylinder) throw std::invalid_argument("charpoly_cylinder needs a cylinder");
  const int H = z_degree_bound(g);
  const int N = 2 * H + 1;
  KasteleynOperator K = assemble(g, o);
  std::vector<cplx> vals(static_cast<std::size_t>(N));
  parallel_for(vals.size(), [&](std::size_t a) {
    vals[a] = determinant(evaluate(K, root_of_unity(static_cast<int>(a), N)));
  });
  std::vector<cplx> c(static_cast<std::size_t>(N));
  double cmax = 0.0;
  for (int j = -H; j <= H; ++j) {
    cplx acc = 0.0;
    for (int a = 0; a < N; ++a) acc += vals[static_cast<std::size_t>(a)] * std::conj(root_of_unity(a * j, N));
    acc /= static_cast<double>(N);
    c[static_cast<std::size_t>(j + H)] = acc;
    cmax = std::max(cmax, std::abs(acc));
  }
  LaurentPoly1 p(H);
  double residual = 0.0;
  for (int j = -H; j <= H; ++j) {
    cplx v = c[static_cast<std::size_t>(j + H)];
    residual = std::max(residual, std::abs(v.imag()));
    residual = std::max(residual, std::abs(v.real() - c[static_cast<std::size_t>(-j + H)].real()));
    p.set(j, std::abs(v.real()) <= coeff_tol * cmax ? 0.0 : v.real());
  }
  if (residual > coeff_tol * cmax)
    throw InterpolationError("charpoly interpolation residual " + std::to_string(residual / cmax) +
                                 " (relative) exceeds tolerance",
                             residual / cmax);
  return p;
}

EnlargementReport verify_enlargement(const LaurentPoly2& p1, const LaurentPoly2& pkl, int k, int l, int trials,
                                     std::uint64_t seed, double tol) {
  if (k < 1 || l < 1) throw std::invalid_argument("enlargement factors must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 2.0 * std::numbers::pi);
  EnlargementReport r;
  for (int t = 0; t < trials; ++t) {
    double th = U(rng), ph = U(rng);
    cplx z = std::polar(1.0, th), w = std::polar(1.0, ph);
    cplx rhs = 1.0;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < l; ++b)
        rhs *= p1(std::polar(1.0, (th + 2.0 * std::numbers::pi * a) / k), std::polar(1.0, (ph + 2.0 * std::numbers::pi * b) / l));
    cplx lhs = pkl(z, w);
    double err = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
    if (err > r.max_rel_err) {
      r.max_rel_err = err;
      r.z_witness = z;
      r.w_witness = w;
    }
  }
  r.ok = r.max_rel_err <= tol;
  return r;
}

EnlargementReport verify_enlargement(const LaurentPoly1& p1, const LaurentPoly1& pk, int k, int trials,
                                     std::uint64_t seed, double tol) {
  if (k < 1) throw std::invalid_argument("enlargement factor must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 2.0 * std::numbers::pi);
  EnlargementReport r;
  for (int t = 0; t < trials; ++t) {
    double th = U(rng);
    cplx z = std::polar(1.0, th);
    cplx rhs = 1.0;
    for (int a = 0; a < k; ++a) rhs *= p1(std::polar(1.0, (th + 2.0 * std::numbers::pi * a) / k));
    double err = std::abs(pk(z) - rhs) / std::max(std::abs(rhs), 1e-300);
    if (err > r.max_rel_err) {
      r.max_rel_err = err;
      r.z_witness = z;
    }
  }
  r.ok = r.max_rel_err <= tol;
  return r;
}

namespace {

// Laurent polynomials in w as coefficient vectors centred at index `bound`.
struct WPoly {
  int bound = 0;
  std::vector<double> c{0.0};
  static WPoly make(double lo, double mid, double hi) {  // lo/w + mid + hi w
    WPoly p;
    p.bound = 1;
    p.c = {lo, mid, hi};
    return p;
  }
  double at(int j) const { return std::abs(j) > bound ? 0.0 : c[static_cast<std::size_t>(j + bound)]; }
};

WPoly mul(const WPoly& a, const WPoly& b) {
  WPoly r;
  r.bound = a.bound + b.bound;
  r.c.assign(static_cast<std::size_t>(2 * r.bound + 1), 0.0);
  for (int i = -a.bound; i <= a.bound; ++i)
    for (int j = -b.bound; j <= b.bound; ++j) r.c[static_cast<std::size_t>(i + j + r.bound)] += a.at(i) * b.at(j);
  return r;
}

WPoly add(const WPoly& a, const WPoly& b) {
  WPoly r;
  r.bound = std::max(a.bound, b.bound);
  r.c.assign(static_cast<std::size_t>(2 * r.bound + 1), 0.0);
  for (int i = -r.bound; i <= r.bound; ++i) r.c[static_cast<std::size_t>(i + r.bound)] = a.at(i) + b.at(i);
  return r;
}

WPoly constant(double v) {
  WPoly p;
  p.c = {v};
  return p;
}

}  // namespace

LaurentPoly2 transfer_sum_poly(const std::vector<TransferBlock>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("need at least one block");
  const int n = static_cast<int>(blocks.size());
  WPoly down = constant(1.0), up = constant(1.0);  // coefficients of 1/z and z
  using M2 = std::array<std::array<WPoly, 2>, 2>;
  M2 T{{{constant(1.0), constant(0.0)}, {constant(0.0), constant(1.0)}}};
  for (const auto& b : blocks) {
    for (double v : {b.a1, b.b1, b.c1, b.a2, b.b2, b.c2})
      if (!(v > 0.0)) throw std::invalid_argument("block weights must be positive");
    double a = b.a1 * b.a2, bb = b.b1 * b.b2, c = b.c1 * b.c2;
    down = mul(down, WPoly::make(0.0, c - a * bb, a - bb * c));
    up = mul(up, WPoly::make(a - bb * c, c - a * bb, 0.0));
    M2 V{{{WPoly::make(a * c, a * a + c * c, a * c), WPoly::make(b.a1 * b.c1 * b.b2, 0.0, -b.a1 * b.c1 * b.b2)},
          {WPoly::make(-b.b1 * b.a2 * b.c2, 0.0, b.b1 * b.a2 * b.c2), WPoly::make(-bb, bb * bb + 1.0, -bb)}}};
    M2 R;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        R[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            add(mul(T[static_cast<std::size_t>(i)][0], V[0][static_cast<std::size_t>(j)]),
                mul(T[static_cast<std::size_t>(i)][1], V[1][static_cast<std::size_t>(j)]));
    T = R;
  }
  WPoly trace = add(T[0][0], T[1][1]);
  LaurentPoly2 p(1, n);
  for (int j = -n; j <= n; ++j) {
    p.set(0, j, trace.at(j));
    p.set(-1, j, -down.at(j));
    p.set(1, j, -up.at(j));
  }
  return p;
}

FisherGraph transfer_block_graph(const std::vector<TransferBlock>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("need at least one block");
  WeightMap w;
  for (int i = 0; i < static_cast<int>(blocks.size()); ++i) {
    const auto& b = blocks[static_cast<std::size_t>(i)];
    const double v[6] = {b.a1, b.b1, b.c1, b.a2, b.b2, b.c2};
    for (int s = 0; s < kTriangleSides; ++s) w[{EdgeKind::Triangle, i, 0, s}] = v[s];
  }
  return build_torus_fisher(static_cast<int>(blocks.size()), 1, w);
}

}  // namespace fisher
