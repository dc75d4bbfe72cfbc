#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iscat/mesh.hpp"

namespace iscat {

// A partition of a set of mesh triangles into zones. Each zone carries one
// parameter of a piecewise-constant index. Zone element lists are sorted.
class Zoning {
 public:
  Zoning() = default;
  // Throws InvalidArgument on empty zones, overlaps or out-of-range indices.
  Zoning(std::size_t num_triangles, std::vector<std::vector<int>> zones);

  std::size_t size() const { return zones_.size(); }
  const std::vector<std::vector<int>>& zones() const { return zones_; }
  const std::vector<int>& zone(std::size_t i) const { return zones_[i]; }

  // Zone containing triangle t, or -1.
  int zone_of(int t) const { return zone_of_[t]; }
  std::size_t num_triangles() const { return zone_of_.size(); }
  std::size_t num_elements() const { return covered_; }

  // True when the zones cover exactly the Inhomogeneity-tagged triangles.
  bool covers_inhomogeneity(const TriangleMesh& mesh) const;

  bool operator==(const Zoning& other) const { return zones_ == other.zones_; }

 private:
  std::vector<std::vector<int>> zones_;
  std::vector<int> zone_of_;
  std::size_t covered_ = 0;
};

// One zone covering all of D.
Zoning single_zone(const TriangleMesh& mesh);

// One zone per D-element, in element order.
Zoning per_element_zoning(const TriangleMesh& mesh);

// Balanced partition of D into n edge-connected zones (max/min size <= 3).
Zoning partition_zones(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed);

// Replaces zone `index` by four sub-zones: the first keeps the index, the
// other three are appended. Requires more than 16 elements; each sub-zone
// gets at least 4. Connected zones split into connected sub-zones;
// disconnected zones (possible for a selection root) get a balanced
// geometric split. Throws NumericalFailure if a connected zone has no such
// split (e.g. a spur of fewer than 4 elements on each side of a junction).
Zoning split_zone(const TriangleMesh& mesh, const Zoning& zoning, std::size_t index);

inline constexpr std::size_t kMinSplitSize = 16;
inline constexpr std::size_t kMinZoneSize = 4;

// Edge-connectivity of a triangle set.
bool is_edge_connected(const TriangleMesh& mesh, std::span<const int> elements);

// Evaluation points for the localization indicator: one per D-element.
struct ProbePoints {
  std::vector<Vec2> points;
  std::vector<int> elements;
  std::size_t size() const { return points.size(); }
};

ProbePoints probe_points(const TriangleMesh& mesh);

}  // namespace iscat
