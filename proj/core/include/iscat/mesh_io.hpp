#pragma once

#include <iosfwd>
#include <string>

#include "iscat/mesh.hpp"
#include "iscat/zoning.hpp"

namespace iscat {

// "MESH2D v1" text format: counts line, one "x y" line per vertex (17
// significant digits), one "v0 v1 v2 tag" line per triangle.
void write_mesh(std::ostream& out, const TriangleMesh& mesh);
// The format carries no PML description; the caller supplies the box.
TriangleMesh read_mesh(std::istream& in, const BoxGeometry& box);

// "ZONES v1" text format: "<n_elements> <N>", then "element zone" lines
// sorted by element index.
void write_zoning(std::ostream& out, const Zoning& zoning);
Zoning read_zoning(std::istream& in, std::size_t num_triangles);

void save_mesh(const std::string& path, const TriangleMesh& mesh);
TriangleMesh load_mesh(const std::string& path, const BoxGeometry& box);
void save_zoning(const std::string& path, const Zoning& zoning);
Zoning load_zoning(const std::string& path, std::size_t num_triangles);

}  // namespace iscat
