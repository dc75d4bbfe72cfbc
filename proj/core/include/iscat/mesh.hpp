#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "iscat/types.hpp"

namespace iscat {

// Region label of a triangle. Numeric values are the on-disk tags.
enum class Region : std::uint8_t { Inhomogeneity = 0, Buffer = 1, Pml = 2 };

// Geometry of the computational box: disc of `radius` at the origin, a
// buffer annulus, then a Cartesian PML frame of width `pml_thickness`.
struct BoxGeometry {
  double radius = 1.0;
  double pml_inner = 0.0;      // half-width of the non-PML square
  double pml_thickness = 0.0;  // PML frame width
  double half_width() const { return pml_inner + pml_thickness; }
};

struct MeshParams {
  double radius = 1.0;
  double wave_number = 5.0;
  double elements_per_wavelength = 20.0;
  double pml_thickness = -1.0;  // < 0 selects one wavelength
  double buffer = -1.0;         // < 0 selects half a wavelength
  std::uint64_t seed = 0;

  double wavelength() const { return 2.0 * kPi / wave_number; }
};

class TriangleMesh {
 public:
  TriangleMesh() = default;
  TriangleMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
               std::vector<Region> tags, BoxGeometry box);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Region>& tags() const { return tags_; }
  const BoxGeometry& box() const { return box_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  double area(int t) const;
  Vec2 centroid(int t) const;
  Region tag(int t) const { return tags_[t]; }

  // Indices of Inhomogeneity-tagged triangles, ascending.
  const std::vector<int>& inhomogeneity_elements() const { return inhomogeneity_; }
  // Position of triangle t inside inhomogeneity_elements(), or -1.
  int inhomogeneity_slot(int t) const { return slot_[t]; }

  // Vertices lying on the outer box boundary (Dirichlet nodes).
  const std::vector<int>& boundary_vertices() const { return boundary_; }

  // Edge neighbours of every triangle (-1 across the outer boundary).
  const std::vector<std::array<int, 3>>& neighbours() const { return neighbours_; }

  // Smallest interior angle over all triangles, in degrees.
  double min_angle_degrees() const;

  bool operator==(const TriangleMesh& other) const;

 private:
  void build_topology();

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Region> tags_;
  BoxGeometry box_;
  std::vector<int> inhomogeneity_;
  std::vector<int> slot_;
  std::vector<int> boundary_;
  std::vector<std::array<int, 3>> neighbours_;
};

// Builds a quality triangulation of the PML-padded box with the disc
// boundary resolved by a fixed vertex ring. Deterministic for a given seed;
// distinct seeds give statistically equivalent but different meshes.
TriangleMesh build_disc_mesh(const MeshParams& params);

// Throws InvalidArgument when the mesh is not conforming or has a
// non-positive triangle.
void validate_mesh(const TriangleMesh& mesh);

// Barycentric coordinates of p in triangle t.
std::array<double, 3> barycentric(const TriangleMesh& mesh, int t, const Vec2& p);

}  // namespace iscat
