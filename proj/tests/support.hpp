#pragma once

// Meshes shared by the test cases of one binary, built on first use.

#include <random>

#include "iscat/mesh.hpp"

namespace iscat::test {

// k = 5, radius 1, 10 elements per wavelength: about 660 D-elements.
inline const TriangleMesh& coarse_mesh() {
  static const TriangleMesh mesh = [] {
    MeshParams p;
    p.elements_per_wavelength = 10.0;
    p.seed = 1;
    return build_disc_mesh(p);
  }();
  return mesh;
}

// The reconstruction mesh of the disc-in-disc experiments.
inline const TriangleMesh& paper_mesh() {
  static const TriangleMesh mesh = [] {
    MeshParams p;
    p.seed = 1;
    return build_disc_mesh(p);
  }();
  return mesh;
}

inline CMatrix random_cmatrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {g(rng), g(rng)};
  }
  return m;
}

}  // namespace iscat::test
