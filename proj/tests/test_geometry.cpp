#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "iscat/directions.hpp"
#include "iscat/mesh_io.hpp"
#include "iscat/zoning.hpp"
#include "split_oracle.hpp"
#include "support.hpp"

using namespace iscat;
using iscat::test::coarse_mesh;
using iscat::test::paper_mesh;

namespace {

// Elements reached by a breadth-first walk of the dual graph from `start`.
std::vector<int> grow_patch(const TriangleMesh& mesh, int start, std::size_t count) {
  std::vector<int> patch{start};
  std::set<int> seen{start};
  for (std::size_t head = 0; head < patch.size() && patch.size() < count; ++head) {
    for (int nb : mesh.neighbours()[patch[head]]) {
      if (nb < 0 || mesh.tag(nb) != Region::Inhomogeneity || !seen.insert(nb).second) continue;
      patch.push_back(nb);
      if (patch.size() == count) break;
    }
  }
  return patch;
}

void check_partition(const TriangleMesh& mesh, const Zoning& z) {
  REQUIRE(z.covers_inhomogeneity(mesh));
  std::size_t total = 0;
  for (const auto& zone : z.zones()) {
    REQUIRE(!zone.empty());
    REQUIRE(is_edge_connected(mesh, zone));
    total += zone.size();
  }
  REQUIRE(total == mesh.inhomogeneity_elements().size());
}

}  // namespace

TEST_CASE("paper-size reconstruction mesh", "[mesh]") {
  const auto& mesh = paper_mesh();
  REQUIRE_NOTHROW(validate_mesh(mesh));
  const auto n_d = mesh.inhomogeneity_elements().size();
  CHECK(n_d >= 2500);
  CHECK(n_d <= 3000);
  CHECK(mesh.min_angle_degrees() >= 20.0);

  double area = 0.0;
  for (int t : mesh.inhomogeneity_elements()) {
    area += mesh.area(t);
    CHECK(mesh.centroid(t).norm() < 1.0);
  }
  // Inscribed polygon of the disc.
  CHECK(area < kPi);
  CHECK(area > 0.99 * kPi);
  // Outside D, no centroid lies inside the unit disc.
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    if (mesh.tag(static_cast<int>(t)) != Region::Inhomogeneity) CHECK(mesh.centroid(static_cast<int>(t)).norm() > 0.95);
  }
}

TEST_CASE("finer mesh quadruples the element count", "[mesh]") {
  MeshParams p;
  p.elements_per_wavelength = 40.0;
  p.seed = 2;
  const auto fine = build_disc_mesh(p);
  REQUIRE_NOTHROW(validate_mesh(fine));
  const double ratio = static_cast<double>(fine.inhomogeneity_elements().size()) /
                       static_cast<double>(paper_mesh().inhomogeneity_elements().size());
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("mesh build is deterministic per seed", "[mesh][determinism]") {
  MeshParams p;
  p.elements_per_wavelength = 10.0;
  p.seed = 1;
  CHECK(build_disc_mesh(p) == coarse_mesh());
  p.seed = 9;
  CHECK_FALSE(build_disc_mesh(p) == coarse_mesh());
}

TEST_CASE("mesh build rejects bad geometry", "[mesh]") {
  MeshParams p;
  p.radius = 0.0;
  CHECK_THROWS_AS(build_disc_mesh(p), InvalidArgument);
  p = {};
  p.wave_number = -1.0;
  CHECK_THROWS_AS(build_disc_mesh(p), InvalidArgument);
  p = {};
  p.elements_per_wavelength = 9.0;
  CHECK_THROWS_AS(build_disc_mesh(p), InvalidArgument);
}

TEST_CASE("box boundary carries the Dirichlet nodes", "[mesh]") {
  const auto& mesh = coarse_mesh();
  const double hw = mesh.box().half_width();
  REQUIRE(!mesh.boundary_vertices().empty());
  for (int v : mesh.boundary_vertices()) {
    const Vec2& x = mesh.vertices()[v];
    CHECK(std::max(std::abs(x.x()), std::abs(x.y())) == Catch::Approx(hw).margin(1e-12));
  }
}

TEST_CASE("mesh and zoning files round-trip", "[mesh][io]") {
  const auto& mesh = coarse_mesh();
  std::stringstream buf;
  write_mesh(buf, mesh);
  const auto back = read_mesh(buf, mesh.box());
  CHECK(back == mesh);

  const auto z = partition_zones(mesh, 12, 5);
  std::stringstream zbuf;
  write_zoning(zbuf, z);
  CHECK(read_zoning(zbuf, mesh.num_triangles()) == z);

  std::stringstream again;
  write_mesh(again, back);
  std::stringstream first;
  write_mesh(first, mesh);
  CHECK(again.str() == first.str());

  std::stringstream bad("MESH3D v1\n0 0\n");
  CHECK_THROWS_AS(read_mesh(bad, mesh.box()), InvalidArgument);
}

TEST_CASE("partition_zones extremes", "[zoning]") {
  const auto& mesh = coarse_mesh();
  const auto n_d = mesh.inhomogeneity_elements().size();
  const auto all = partition_zones(mesh, n_d, 1);
  CHECK(all == per_element_zoning(mesh));
  for (const auto& zone : all.zones()) CHECK(zone.size() == 1);
  const auto one = partition_zones(mesh, 1, 1);
  CHECK(one.size() == 1);
  CHECK(one.zone(0) == mesh.inhomogeneity_elements());
  CHECK_THROWS_AS(partition_zones(mesh, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(partition_zones(mesh, n_d + 1, 1), InvalidArgument);
}

TEST_CASE("ten zones on the paper mesh", "[zoning]") {
  const auto& mesh = paper_mesh();
  const auto z = partition_zones(mesh, 10, 3);
  REQUIRE(z.size() == 10);
  check_partition(mesh, z);
  std::size_t lo = mesh.num_triangles();
  std::size_t hi = 0;
  for (const auto& zone : z.zones()) {
    lo = std::min(lo, zone.size());
    hi = std::max(hi, zone.size());
  }
  CHECK(static_cast<double>(hi) <= 3.0 * static_cast<double>(lo));
  CHECK(partition_zones(mesh, 10, 3) == z);
}

TEST_CASE("split_zone boundary cases", "[zoning]") {
  const auto& mesh = coarse_mesh();
  const int start = mesh.inhomogeneity_elements()[mesh.inhomogeneity_elements().size() / 2];

  const auto patch17 = grow_patch(mesh, start, 17);
  REQUIRE(patch17.size() == 17);
  const Zoning z17(mesh.num_triangles(), {patch17});
  const auto split = split_zone(mesh, z17, 0);
  REQUIRE(split.size() == 4);
  std::vector<std::size_t> sizes;
  for (const auto& zone : split.zones()) {
    sizes.push_back(zone.size());
    CHECK(is_edge_connected(mesh, zone));
  }
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{4, 4, 4, 5});

  const Zoning z16(mesh.num_triangles(), {grow_patch(mesh, start, 16)});
  CHECK_THROWS_AS(split_zone(mesh, z16, 0), InvalidArgument);
  CHECK_THROWS_AS(split_zone(mesh, z17, 1), InvalidArgument);

  const auto four = split_zone(mesh, single_zone(mesh), 0);
  CHECK(four.size() == 4);
  check_partition(mesh, four);
}

TEST_CASE("zoning invariants over random inputs", "[zoning][property]") {
  const auto& mesh = coarse_mesh();
  const auto& elements = mesh.inhomogeneity_elements();
  std::mt19937_64 rng(2024);
  constexpr int kCases = 120;
  for (int c = 0; c < kCases; ++c) {
    CAPTURE(c);
    std::uniform_int_distribution<std::size_t> pick_n(1, 120);
    const std::size_t n = pick_n(rng);
    const auto seed = rng();
    const auto z = partition_zones(mesh, n, seed);
    REQUIRE(z.size() == n);
    check_partition(mesh, z);
    std::size_t lo = elements.size();
    std::size_t hi = 0;
    for (const auto& zone : z.zones()) {
      lo = std::min(lo, zone.size());
      hi = std::max(hi, zone.size());
    }
    CHECK(static_cast<double>(hi) <= 3.0 * static_cast<double>(lo));
    CHECK(partition_zones(mesh, n, seed) == z);

    // Split a random zone large enough to split.
    std::vector<std::size_t> big;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (z.zone(i).size() > kMinSplitSize) big.push_back(i);
    }
    if (big.empty()) continue;
    const std::size_t target = big[std::uniform_int_distribution<std::size_t>(0, big.size() - 1)(rng)];
    const auto s = split_zone(mesh, z, target);
    REQUIRE(s.size() == z.size() + 3);
    check_partition(mesh, s);
    std::multiset<int> before(z.zone(target).begin(), z.zone(target).end());
    std::multiset<int> after;
    for (std::size_t i : {target, s.size() - 3, s.size() - 2, s.size() - 1}) {
      CHECK(s.zone(i).size() >= kMinZoneSize);
      after.insert(s.zone(i).begin(), s.zone(i).end());
    }
    CHECK(before == after);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (i != target) CHECK(s.zone(i) == z.zone(i));
    }
  }
}

TEST_CASE("split of random connected patches", "[zoning][property]") {
  const auto& mesh = coarse_mesh();
  const auto& elements = mesh.inhomogeneity_elements();
  std::mt19937_64 rng(77);
  for (int c = 0; c < 100; ++c) {
    CAPTURE(c);
    const int start = elements[std::uniform_int_distribution<std::size_t>(0, elements.size() - 1)(rng)];
    const std::size_t want = std::uniform_int_distribution<std::size_t>(17, 160)(rng);
    const auto patch = grow_patch(mesh, start, want);
    if (patch.size() <= kMinSplitSize) continue;
    const Zoning z(mesh.num_triangles(), {patch});
    const auto s = split_zone(mesh, z, 0);
    REQUIRE(s.size() == 4);
    std::size_t total = 0;
    for (const auto& zone : s.zones()) {
      CHECK(zone.size() >= kMinZoneSize);
      CHECK(is_edge_connected(mesh, zone));
      total += zone.size();
    }
    CHECK(total == patch.size());
    CHECK(split_zone(mesh, z, 0) == s);
  }
}

TEST_CASE("small irregular zones split into connected parts", "[zoning][property]") {
  // Zones of 17-25 elements from fine partitions; some defeat region growing
  // and a few admit no split at all.
  const auto& mesh = paper_mesh();
  std::size_t splits = 0, impossible = 0;
  for (std::size_t n : {120, 135, 150}) {
    const auto z = partition_zones(mesh, n, 1000 + n);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (z.zone(i).size() <= kMinSplitSize) continue;
      INFO("N=" << n << " zone " << i);
      try {
        const auto s = split_zone(mesh, z, i);
        ++splits;
        for (std::size_t j : {i, n, n + 1, n + 2}) {
          CHECK(s.zone(j).size() >= kMinZoneSize);
          CHECK(is_edge_connected(mesh, s.zone(j)));
        }
      } catch (const NumericalFailure&) {
        ++impossible;
        CHECK_FALSE(iscat::testing::four_way_split_exists(mesh, z.zone(i)));
      }
    }
  }
  CHECK(splits > 100);
  CHECK(impossible <= 3);
}

TEST_CASE("split oracle accepts compact patches", "[zoning]") {
  const auto& mesh = coarse_mesh();
  const int start = mesh.inhomogeneity_elements()[mesh.inhomogeneity_elements().size() / 2];
  CHECK(iscat::testing::four_way_split_exists(mesh, grow_patch(mesh, start, 17)));
  CHECK(iscat::testing::four_way_split_exists(mesh, grow_patch(mesh, start, 20)));
}

TEST_CASE("disconnected zone splits into balanced parts", "[zoning]") {
  const auto& mesh = coarse_mesh();
  const auto& el = mesh.inhomogeneity_elements();
  auto a = grow_patch(mesh, el.front(), 20);
  const auto b = grow_patch(mesh, el.back(), 20);
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  REQUIRE_FALSE(is_edge_connected(mesh, a));
  const auto s = split_zone(mesh, Zoning(mesh.num_triangles(), {a}), 0);
  REQUIRE(s.size() == 4);
  std::size_t total = 0;
  for (const auto& zone : s.zones()) {
    CHECK(zone.size() >= a.size() / 4);
    total += zone.size();
  }
  CHECK(total == a.size());
}

TEST_CASE("zoning rejects overlaps and empty zones", "[zoning]") {
  CHECK_THROWS_AS(Zoning(4, {{0, 1}, {1, 2}}), InvalidArgument);
  CHECK_THROWS_AS(Zoning(4, {{0}, {}}), InvalidArgument);
  CHECK_THROWS_AS(Zoning(4, {{0, 7}}), InvalidArgument);
  CHECK_THROWS_AS(Zoning(4, {}), InvalidArgument);
}

TEST_CASE("probe points are element centroids", "[probes]") {
  const TriangleMesh tri({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, {{0, 1, 2}}, {Region::Inhomogeneity}, BoxGeometry{});
  const auto p = probe_points(tri);
  REQUIRE(p.size() == 1);
  CHECK(p.points[0].x() == Catch::Approx(1.0 / 3.0));
  CHECK(p.points[0].y() == Catch::Approx(1.0 / 3.0));

  const auto& mesh = paper_mesh();
  const auto probes = probe_points(mesh);
  CHECK(probes.size() == mesh.inhomogeneity_elements().size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto b = barycentric(mesh, probes.elements[i], probes.points[i]);
    for (double l : b) CHECK(l >= 0.0);
  }
}

TEST_CASE("direction grids", "[directions]") {
  const auto full = DirectionGrid::full(30);
  CHECK(full.is_full());
  double sum = 0.0;
  for (std::size_t j = 0; j < full.size(); ++j) {
    sum += full.weight(j);
    CHECK(full.direction(j).norm() == Catch::Approx(1.0));
  }
  CHECK(sum == Catch::Approx(2.0 * kPi));

  const DirectionGrid part(30, 0.0, 1.5 * kPi);
  CHECK_FALSE(part.is_full());
  CHECK(part.weight(0) == Catch::Approx(1.5 * kPi / 30.0));
  CHECK(part.angle(29) < 1.5 * kPi);

  const auto copy = DirectionGrid::from_samples(part.angles(), part.weights());
  CHECK(copy == part);
  CHECK(copy.aperture() == Catch::Approx(part.aperture()));
  CHECK_THROWS_AS(DirectionGrid::from_samples({0.0}, {}), InvalidArgument);
  CHECK_THROWS_AS(DirectionGrid::from_samples({0.0}, {-1.0}), InvalidArgument);
  CHECK_THROWS_AS(DirectionGrid(0, 0.0, 1.0), InvalidArgument);
}
