#pragma once

#include <array>
#include <span>
#include <vector>

#include "iscat/types.hpp"

namespace iscat {

// Snaps points onto an integer lattice of spacing `quantum` (in place) and
// returns the Delaunay triangulation of their convex hull, counter-clockwise.
// Snapping makes the predicates exact; callers must keep points distinct at
// that resolution.
std::vector<std::array<int, 3>> delaunay_triangulate(std::vector<Vec2>& points, double quantum);

}  // namespace iscat
