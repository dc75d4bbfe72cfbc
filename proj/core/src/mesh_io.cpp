#include "iscat/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace iscat {

namespace {

void expect_header(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw InvalidArgument("expected header '" + header + "', got '" + line + "'");
  }
}

template <typename Stream>
Stream open(const std::string& path) {
  Stream s(path);
  if (!s) throw InvalidArgument("cannot open " + path);
  return s;
}

}  // namespace

void write_mesh(std::ostream& out, const TriangleMesh& mesh) {
  out << "MESH2D v1\n" << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << '\n';
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << static_cast<int>(mesh.tags()[t]) << '\n';
  }
}

TriangleMesh read_mesh(std::istream& in, const BoxGeometry& box) {
  expect_header(in, "MESH2D v1");
  std::size_t nv = 0;
  std::size_t nt = 0;
  if (!(in >> nv >> nt)) throw InvalidArgument("mesh: bad counts line");
  std::vector<Vec2> vertices(nv);
  for (auto& v : vertices) {
    if (!(in >> v.x() >> v.y())) throw InvalidArgument("mesh: truncated vertex block");
  }
  std::vector<std::array<int, 3>> triangles(nt);
  std::vector<Region> tags(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    int tag = 0;
    if (!(in >> triangles[t][0] >> triangles[t][1] >> triangles[t][2] >> tag)) {
      throw InvalidArgument("mesh: truncated triangle block");
    }
    if (tag < 0 || tag > 2) throw InvalidArgument("mesh: unknown tag " + std::to_string(tag));
    tags[t] = static_cast<Region>(tag);
  }
  return TriangleMesh(std::move(vertices), std::move(triangles), std::move(tags), box);
}

void write_zoning(std::ostream& out, const Zoning& zoning) {
  out << "ZONES v1\n" << zoning.num_elements() << ' ' << zoning.size() << '\n';
  for (std::size_t t = 0; t < zoning.num_triangles(); ++t) {
    const int z = zoning.zone_of(static_cast<int>(t));
    if (z >= 0) out << t << ' ' << z << '\n';
  }
}

Zoning read_zoning(std::istream& in, std::size_t num_triangles) {
  expect_header(in, "ZONES v1");
  std::size_t ne = 0;
  std::size_t n = 0;
  if (!(in >> ne >> n)) throw InvalidArgument("zoning: bad counts line");
  std::vector<std::vector<int>> zones(n);
  for (std::size_t i = 0; i < ne; ++i) {
    int t = 0;
    std::size_t z = 0;
    if (!(in >> t >> z)) throw InvalidArgument("zoning: truncated element block");
    if (z >= n) throw InvalidArgument("zoning: zone index out of range");
    zones[z].push_back(t);
  }
  return Zoning(num_triangles, std::move(zones));
}

void save_mesh(const std::string& path, const TriangleMesh& mesh) {
  auto out = open<std::ofstream>(path);
  write_mesh(out, mesh);
}

TriangleMesh load_mesh(const std::string& path, const BoxGeometry& box) {
  auto in = open<std::ifstream>(path);
  return read_mesh(in, box);
}

void save_zoning(const std::string& path, const Zoning& zoning) {
  auto out = open<std::ofstream>(path);
  write_zoning(out, zoning);
}

Zoning load_zoning(const std::string& path, std::size_t num_triangles) {
  auto in = open<std::ifstream>(path);
  return read_zoning(in, num_triangles);
}

}  // namespace iscat
