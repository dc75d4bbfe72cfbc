#include "iscat/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

#include "iscat/delaunay.hpp"

namespace iscat {

namespace {

// Nominal edge length per (wavelength / elements_per_wavelength). Calibrated
// so that the unit disc at k = 5 with 20 elements per wavelength carries
// about 2670 triangles.
constexpr double kEdgePerDiameter = 0.825;

constexpr double kMinAngleDegrees = 20.0;

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

bool on_box_boundary(const Vec2& p, double half, double tol) {
  return std::abs(std::abs(p.x()) - half) <= tol || std::abs(std::abs(p.y()) - half) <= tol;
}

// Force-equilibrium smoothing with periodic Delaunay retriangulation, in the
// style of Persson & Strang's distmesh. Fixed points never move; points on
// the box boundary slide along it.
class Smoother {
 public:
  Smoother(std::vector<Vec2> points, std::size_t num_fixed, double h, double half)
      : p_(std::move(points)), num_fixed_(num_fixed), h_(h), half_(half) {}

  void run(int max_iterations) {
    constexpr double kDeltaT = 0.2;
    constexpr double kFScale = 1.2;
    constexpr double kRetriangulateTol = 0.1;
    constexpr double kStopTol = 1e-3;

    std::vector<Vec2> last(p_.size(), Vec2(1e30, 1e30));
    std::vector<std::pair<int, int>> bars;
    std::vector<Vec2> force(p_.size());
    for (int it = 0; it < max_iterations; ++it) {
      double moved = 0.0;
      for (std::size_t i = 0; i < p_.size(); ++i) moved = std::max(moved, (p_[i] - last[i]).norm());
      if (moved > kRetriangulateTol * h_) {
        triangulate();
        last = p_;
        bars.clear();
        std::vector<std::uint64_t> keys;
        keys.reserve(3 * tri_.size());
        for (const auto& t : tri_) {
          for (int e = 0; e < 3; ++e) keys.push_back(edge_key(t[e], t[(e + 1) % 3]));
        }
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (auto k : keys) bars.emplace_back(static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu));
      }

      double sum_l2 = 0.0;
      for (const auto& [a, b] : bars) sum_l2 += (p_[a] - p_[b]).squaredNorm();
      const double l0 = kFScale * std::sqrt(sum_l2 / static_cast<double>(bars.size()));

      std::fill(force.begin(), force.end(), Vec2::Zero());
      for (const auto& [a, b] : bars) {
        const Vec2 d = p_[a] - p_[b];
        const double len = d.norm();
        const double f = std::max(l0 - len, 0.0);
        if (f == 0.0 || len == 0.0) continue;
        const Vec2 fv = (f / len) * d;
        force[a] += fv;
        force[b] -= fv;
      }

      double max_step = 0.0;
      const double tol = 1e-12 * half_;
      for (std::size_t i = num_fixed_; i < p_.size(); ++i) {
        const Vec2 old = p_[i];
        const bool was_boundary = on_box_boundary(old, half_, tol);
        Vec2 step = kDeltaT * force[i];
        if (was_boundary) {
          // Keep boundary points on their side.
          if (std::abs(std::abs(old.x()) - half_) <= tol) step.x() = 0.0;
          if (std::abs(std::abs(old.y()) - half_) <= tol) step.y() = 0.0;
        }
        Vec2 next = old + step;
        next.x() = std::clamp(next.x(), -half_, half_);
        next.y() = std::clamp(next.y(), -half_, half_);
        p_[i] = next;
        max_step = std::max(max_step, (next - old).norm());
      }
      if (max_step < kStopTol * h_) break;
    }
    triangulate();
  }

  std::vector<Vec2>& points() { return p_; }
  const std::vector<std::array<int, 3>>& triangles() const { return tri_; }

 private:
  void triangulate() { tri_ = delaunay_triangulate(p_, std::ldexp(half_, -28)); }

  std::vector<Vec2> p_;
  std::size_t num_fixed_;
  double h_;
  double half_;
  std::vector<std::array<int, 3>> tri_;
};

}  // namespace

TriangleMesh::TriangleMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                           std::vector<Region> tags, BoxGeometry box)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), tags_(std::move(tags)), box_(box) {
  if (tags_.size() != triangles_.size()) throw InvalidArgument("mesh: one tag per triangle required");
  for (const auto& t : triangles_) {
    for (int v : t) {
      if (v < 0 || static_cast<std::size_t>(v) >= vertices_.size()) {
        throw InvalidArgument("mesh: vertex index out of range");
      }
    }
  }
  build_topology();
}

void TriangleMesh::build_topology() {
  inhomogeneity_.clear();
  slot_.assign(triangles_.size(), -1);
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    if (tags_[t] == Region::Inhomogeneity) {
      slot_[t] = static_cast<int>(inhomogeneity_.size());
      inhomogeneity_.push_back(static_cast<int>(t));
    }
  }

  neighbours_.assign(triangles_.size(), {-1, -1, -1});
  std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
  edges.reserve(3 * triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int e = 0; e < 3; ++e) {
      const auto key = edge_key(triangles_[t][(e + 1) % 3], triangles_[t][(e + 2) % 3]);
      auto [it, inserted] = edges.try_emplace(key, static_cast<int>(t), e);
      if (!inserted) {
        const auto [other, oe] = it->second;
        if (other < 0) throw InvalidArgument("mesh: edge shared by more than two triangles");
        neighbours_[t][e] = other;
        neighbours_[other][oe] = static_cast<int>(t);
        it->second = {-1, -1};
      }
    }
  }

  boundary_.clear();
  const double half = box_.half_width();
  if (half > 0.0) {
    const double tol = 1e-9 * half;
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      if (on_box_boundary(vertices_[v], half, tol)) boundary_.push_back(static_cast<int>(v));
    }
  }
}

double TriangleMesh::area(int t) const {
  const auto& tri = triangles_[t];
  return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

Vec2 TriangleMesh::centroid(int t) const {
  const auto& tri = triangles_[t];
  return (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
}

double TriangleMesh::min_angle_degrees() const {
  double worst = 180.0;
  for (const auto& tri : triangles_) {
    for (int i = 0; i < 3; ++i) {
      const Vec2 a = vertices_[tri[(i + 1) % 3]] - vertices_[tri[i]];
      const Vec2 b = vertices_[tri[(i + 2) % 3]] - vertices_[tri[i]];
      const double c = std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0);
      worst = std::min(worst, std::acos(c) * 180.0 / kPi);
    }
  }
  return worst;
}

bool TriangleMesh::operator==(const TriangleMesh& other) const {
  return vertices_ == other.vertices_ && triangles_ == other.triangles_ && tags_ == other.tags_ &&
         box_.radius == other.box_.radius && box_.pml_inner == other.box_.pml_inner &&
         box_.pml_thickness == other.box_.pml_thickness;
}

void validate_mesh(const TriangleMesh& mesh) {
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    if (!(mesh.area(static_cast<int>(t)) > 0.0)) {
      throw InvalidArgument("mesh: triangle " + std::to_string(t) + " has non-positive area");
    }
  }
  const double half = mesh.box().half_width();
  const double tol = 1e-9 * std::max(half, 1.0);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    for (int e = 0; e < 3; ++e) {
      if (mesh.neighbours()[t][e] >= 0) continue;
      const Vec2& a = mesh.vertices()[tri[(e + 1) % 3]];
      const Vec2& b = mesh.vertices()[tri[(e + 2) % 3]];
      const bool same_side = (std::abs(a.x() - b.x()) <= tol && std::abs(std::abs(a.x()) - half) <= tol) ||
                             (std::abs(a.y() - b.y()) <= tol && std::abs(std::abs(a.y()) - half) <= tol);
      if (!same_side) {
        throw InvalidArgument("mesh: unmatched edge of triangle " + std::to_string(t) +
                              " is not on the outer boundary");
      }
    }
  }
}

std::array<double, 3> barycentric(const TriangleMesh& mesh, int t, const Vec2& p) {
  const auto& tri = mesh.triangles()[t];
  const Vec2& a = mesh.vertices()[tri[0]];
  const Vec2& b = mesh.vertices()[tri[1]];
  const Vec2& c = mesh.vertices()[tri[2]];
  const double total = signed_area(a, b, c);
  return {signed_area(p, b, c) / total, signed_area(a, p, c) / total, signed_area(a, b, p) / total};
}

TriangleMesh build_disc_mesh(const MeshParams& params) {
  if (!(params.radius > 0.0)) throw InvalidArgument("build_disc_mesh: radius must be positive");
  if (!(params.wave_number > 0.0)) throw InvalidArgument("build_disc_mesh: wave number must be positive");
  if (!(params.elements_per_wavelength >= 10.0)) {
    throw InvalidArgument("build_disc_mesh: elements_per_wavelength must be at least 10");
  }
  const double lambda = params.wavelength();
  const double pml = params.pml_thickness < 0.0 ? lambda : params.pml_thickness;
  const double buffer = params.buffer < 0.0 ? 0.5 * lambda : params.buffer;
  if (!(pml > 0.0) || !(buffer > 0.0)) throw InvalidArgument("build_disc_mesh: pml and buffer must be positive");

  BoxGeometry box;
  box.radius = params.radius;
  box.pml_inner = params.radius + buffer;
  box.pml_thickness = pml;
  const double half = box.half_width();
  const double h = kEdgePerDiameter * lambda / params.elements_per_wavelength;

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Vec2> points;
  // Fixed: the disc boundary ring and the four box corners.
  const int ring = std::max(8, static_cast<int>(std::lround(2.0 * kPi * params.radius / h)));
  const double ring_phase = 2.0 * kPi * unit(rng) / ring;
  for (int i = 0; i < ring; ++i) {
    const double a = ring_phase + 2.0 * kPi * i / ring;
    points.emplace_back(params.radius * std::cos(a), params.radius * std::sin(a));
  }
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) points.emplace_back(sx * half, sy * half);
  }
  const std::size_t num_fixed = points.size();

  // Sliding box-boundary points.
  const int per_side = std::max(2, static_cast<int>(std::lround(2.0 * half / h)));
  const double side_shift = (unit(rng) - 0.5) * 0.2;
  for (int i = 1; i < per_side; ++i) {
    const double s = -half + 2.0 * half * (i + side_shift) / per_side;
    points.emplace_back(s, -half);
    points.emplace_back(s, half);
    points.emplace_back(-half, s);
    points.emplace_back(half, s);
  }

  // Interior: jittered hexagonal lattice with random rotation and offset.
  const double angle = unit(rng) * kPi / 3.0;
  const Vec2 e1 = h * Vec2(std::cos(angle), std::sin(angle));
  const Vec2 e2 = h * Vec2(std::cos(angle + kPi / 3.0), std::sin(angle + kPi / 3.0));
  const Vec2 offset = unit(rng) * e1 + unit(rng) * e2;
  const int span = static_cast<int>(std::ceil(2.0 * half / h)) + 2;
  const double margin = 0.5 * h;
  for (int i = -span; i <= span; ++i) {
    for (int j = -span; j <= span; ++j) {
      Vec2 p = offset + static_cast<double>(i) * e1 + static_cast<double>(j) * e2;
      p += 0.05 * h * Vec2(unit(rng) - 0.5, unit(rng) - 0.5);
      if (std::abs(p.x()) > half - margin || std::abs(p.y()) > half - margin) continue;
      if (std::abs(p.norm() - params.radius) < 0.6 * h) continue;
      points.push_back(p);
    }
  }

  Smoother smoother(std::move(points), num_fixed, h, half);
  smoother.run(200);

  auto& verts = smoother.points();
  std::vector<std::array<int, 3>> tris = smoother.triangles();
  std::vector<Region> tags;
  tags.reserve(tris.size());
  for (const auto& t : tris) {
    const Vec2 c = (verts[t[0]] + verts[t[1]] + verts[t[2]]) / 3.0;
    if (c.norm() < params.radius) {
      tags.push_back(Region::Inhomogeneity);
    } else if (std::abs(c.x()) > box.pml_inner || std::abs(c.y()) > box.pml_inner) {
      tags.push_back(Region::Pml);
    } else {
      tags.push_back(Region::Buffer);
    }
  }

  TriangleMesh mesh(std::move(verts), std::move(tris), std::move(tags), box);
  validate_mesh(mesh);
  const double quality = mesh.min_angle_degrees();
  if (quality < kMinAngleDegrees) {
    throw NumericalFailure("build_disc_mesh: minimum angle " + std::to_string(quality) + " below " +
                           std::to_string(kMinAngleDegrees) + " degrees");
  }
  return mesh;
}

}  // namespace iscat
