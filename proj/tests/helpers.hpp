#pragma once

#include <random>
#include <string>

#include "fisher/lattice.hpp"

namespace th {

inline std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

// Cylinder 2 x 1 with a(0,0)=a1, a(1,0)=a2, b(0,0)=b1, b(1,0)=b2.
inline fisher::FisherGraph two_cell(double a1, double a2, double b1, double b2) {
  fisher::WeightMap w;
  w[{fisher::EdgeKind::A, 0, 0, 0}] = a1;
  w[{fisher::EdgeKind::A, 1, 0, 0}] = a2;
  w[{fisher::EdgeKind::B, 0, 0, 0}] = b1;
  w[{fisher::EdgeKind::B, 1, 0, 0}] = b2;
  return fisher::build_cylinder_fisher(2, 1, w);
}

// Every edge weight drawn from dist.
template <class Dist>
fisher::FisherGraph random_graph(int m, int n, fisher::Topology t, std::mt19937_64& rng, Dist dist) {
  auto g0 = t == fisher::Topology::Torus ? fisher::build_torus_fisher(m, n) : fisher::build_cylinder_fisher(m, n);
  fisher::WeightMap w;
  for (const auto& e : g0.edges()) w[{e.kind, e.cell_x, e.cell_y, e.side}] = dist(rng);
  return t == fisher::Topology::Torus ? fisher::build_torus_fisher(m, n, w) : fisher::build_cylinder_fisher(m, n, w);
}

inline fisher::FisherGraph random_graph(int m, int n, fisher::Topology t, std::mt19937_64& rng) {
  return random_graph(m, n, t, rng, std::uniform_real_distribution<double>(0.3, 2.5));
}

}  // namespace th
