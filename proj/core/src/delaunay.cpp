#include "iscat/delaunay.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/polygon/voronoi.hpp>

namespace iscat {

namespace {

struct LatticePoint {
  std::int32_t x;
  std::int32_t y;
};

}  // namespace
}  // namespace iscat

namespace boost::polygon {

template <>
struct geometry_concept<iscat::LatticePoint> {
  using type = point_concept;
};

template <>
struct point_traits<iscat::LatticePoint> {
  using coordinate_type = std::int32_t;
  static coordinate_type get(const iscat::LatticePoint& p, orientation_2d orient) {
    return orient == HORIZONTAL ? p.x : p.y;
  }
};

}  // namespace boost::polygon

namespace iscat {

std::vector<std::array<int, 3>> delaunay_triangulate(std::vector<Vec2>& points, double quantum) {
  if (!(quantum > 0.0)) throw InvalidArgument("delaunay: quantum must be positive");
  std::vector<LatticePoint> lattice;
  lattice.reserve(points.size());
  constexpr double kLimit = static_cast<double>(std::numeric_limits<std::int32_t>::max() / 2);
  for (auto& p : points) {
    const double qx = std::round(p.x() / quantum);
    const double qy = std::round(p.y() / quantum);
    if (std::abs(qx) > kLimit || std::abs(qy) > kLimit) {
      throw InvalidArgument("delaunay: point outside the representable lattice");
    }
    lattice.push_back({static_cast<std::int32_t>(qx), static_cast<std::int32_t>(qy)});
    p = Vec2(qx * quantum, qy * quantum);
  }

  boost::polygon::voronoi_diagram<double> vd;
  boost::polygon::construct_voronoi(lattice.begin(), lattice.end(), &vd);

  auto orient = [&](int a, int b, int c) {
    const auto& pa = lattice[a];
    const auto& pb = lattice[b];
    const auto& pc = lattice[c];
    return (static_cast<std::int64_t>(pb.x) - pa.x) * (static_cast<std::int64_t>(pc.y) - pa.y) -
           (static_cast<std::int64_t>(pb.y) - pa.y) * (static_cast<std::int64_t>(pc.x) - pa.x);
  };

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * points.size());
  std::vector<int> ring;
  for (const auto& vertex : vd.vertices()) {
    ring.clear();
    const auto* edge = vertex.incident_edge();
    do {
      ring.push_back(static_cast<int>(edge->cell()->source_index()));
      edge = edge->rot_next();
    } while (edge != vertex.incident_edge());
    // Cocircular sites give a Voronoi vertex of degree > 3; fan-triangulate
    // the (convex) site polygon.
    for (std::size_t i = 1; i + 1 < ring.size(); ++i) {
      std::array<int, 3> t{ring[0], ring[i], ring[i + 1]};
      const auto o = orient(t[0], t[1], t[2]);
      if (o == 0) continue;
      if (o < 0) std::swap(t[1], t[2]);
      triangles.push_back(t);
    }
  }
  return triangles;
}

}  // namespace iscat
