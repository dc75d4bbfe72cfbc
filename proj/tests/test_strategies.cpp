#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "iscat/mesh_io.hpp"
#include "iscat/strategies.hpp"
#include "iscat/synthetic.hpp"
#include "split_oracle.hpp"
#include "support.hpp"

using namespace iscat;
using iscat::test::coarse_mesh;

namespace {

LocalizationMap random_map(const TriangleMesh& mesh, std::mt19937_64& rng) {
  LocalizationMap map;
  const auto probes = probe_points(mesh);
  map.points = probes.points;
  map.elements = probes.elements;
  std::exponential_distribution<double> e(1.0);
  map.raw.resize(static_cast<Eigen::Index>(probes.size()));
  for (auto& v : map.raw) v = e(rng);
  map.normalized = normalize_indicator(map.raw);
  return map;
}

struct SmallCase {
  const TriangleMesh& mesh = coarse_mesh();
  Scenario sc = builtin_scenario("disc-in-disc");
  FarFieldData data;
  std::vector<cplx> truth;
  StrategyConfig cfg;

  SmallCase() {
    MeshParams p;
    p.elements_per_wavelength = 20.0;
    p.seed = 5;
    const auto g = DirectionGrid::full(10);
    data = add_noise(make_truth(sc, build_disc_mesh(p), 5.0, g, g), 0.02, 7);
    truth = sc.sample(mesh);
    cfg.gn.real_constraint = true;
    cfg.localization.epsilon = 0.02;
  }
};

const SmallCase& small_case() {
  static const SmallCase c;
  return c;
}

}  // namespace

TEST_CASE("zone scores are per-zone maxima", "[strategies]") {
  const auto& mesh = coarse_mesh();
  std::mt19937_64 rng(4);
  const auto map = random_map(mesh, rng);
  const auto z = partition_zones(mesh, 9, 2);
  const RVector s = zone_scores(map, z);
  REQUIRE(s.size() == 9);
  for (std::size_t i = 0; i < z.size(); ++i) {
    double best = 0.0;
    for (std::size_t p = 0; p < map.elements.size(); ++p) {
      if (z.zone_of(map.elements[p]) == static_cast<int>(i)) best = std::max(best, map.normalized[static_cast<Eigen::Index>(p)]);
    }
    CHECK(s[static_cast<Eigen::Index>(i)] == best);
  }
}

TEST_CASE("select_zones thresholds", "[strategies]") {
  const auto& mesh = coarse_mesh();
  std::mt19937_64 rng(5);
  const auto map = random_map(mesh, rng);
  const auto z = per_element_zoning(mesh);
  CHECK(select_zones(map, z, 1e-12).size() == z.size());
  const auto top = select_zones(map, z, 1.0);
  REQUIRE(top.size() == 1);
  Eigen::Index best = 0;
  map.normalized.maxCoeff(&best);
  CHECK(z.zone(static_cast<std::size_t>(top[0]))[0] == map.elements[best]);

  LocalizationMap zero = map;
  zero.raw.setZero();
  zero.normalized.setZero();
  CHECK_THROWS_AS(select_zones(zero, z, 0.5), EmptySelection);
}

TEST_CASE("selection is monotone in the threshold", "[strategies][property]") {
  const auto& mesh = coarse_mesh();
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int c = 0; c < 100; ++c) {
    CAPTURE(c);
    const auto map = random_map(mesh, rng);
    const auto z = partition_zones(mesh, 5 + static_cast<std::size_t>(c % 40), rng());
    double t1 = u(rng);
    double t2 = u(rng);
    if (t1 > t2) std::swap(t1, t2);
    const auto a = select_zones(map, z, t1);
    const auto b = select_zones(map, z, t2);
    CHECK(std::includes(a.begin(), a.end(), b.begin(), b.end()));
    CHECK(std::is_sorted(a.begin(), a.end()));
  }
}

TEST_CASE("strategy config validation", "[strategies]") {
  StrategyConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.threshold = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.threshold = 1.5;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.n_max = 3;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("selective reconstruction freezes unselected elements", "[strategies]") {
  const auto& c = small_case();
  const auto n0 = IndexField::constant(per_element_zoning(c.mesh), 1.3);
  const auto r = selective_reconstruction(c.mesh, n0, c.data, c.cfg, c.truth);
  REQUIRE(!r.selected_elements.empty());
  CHECK(r.selected_elements.size() < c.mesh.inhomogeneity_elements().size());
  const std::set<int> sel(r.selected_elements.begin(), r.selected_elements.end());
  for (int t : c.mesh.inhomogeneity_elements()) {
    if (!sel.count(t)) CHECK(r.field.element_value(t) == cplx(1.3, 0.0));
  }
  CHECK(r.trace.records.back().rel_error < relative_error(c.mesh, n0.element_values(), c.truth));

  const auto again = selective_reconstruction(c.mesh, n0, c.data, c.cfg, c.truth);
  CHECK(again.field.parameters() == r.field.parameters());
  CHECK(again.selected_elements == r.selected_elements);

  StrategyConfig wider = c.cfg;
  wider.threshold = 0.05;
  const auto w = selective_reconstruction(c.mesh, n0, c.data, wider, c.truth);
  CHECK(std::includes(w.selected_elements.begin(), w.selected_elements.end(), r.selected_elements.begin(),
                      r.selected_elements.end()));
}

TEST_CASE("adaptive refinement budget", "[strategies]") {
  const auto& c = small_case();
  const auto n0 = IndexField::constant(single_zone(c.mesh), 1.3);
  StrategyConfig cfg = c.cfg;
  cfg.n_max = 4;
  const auto one = adaptive_refinement(c.mesh, n0, c.data, cfg, c.truth);
  CHECK(one.splits == 1);
  CHECK(one.field.size() == 4);
  CHECK(one.history.size() == 2);

  cfg.n_max = 13;
  const auto r = adaptive_refinement(c.mesh, n0, c.data, cfg, c.truth);
  CHECK(r.splits == 4);
  CHECK(r.field.size() == 13);
  REQUIRE(r.history.size() == 5);
  for (std::size_t h = 1; h < r.history.size(); ++h) {
    CHECK(r.history[h].size() == r.history[h - 1].size() + 3);
    CHECK(r.history[h].covers_inhomogeneity(c.mesh));
    CHECK(r.history[h - 1].zone(static_cast<std::size_t>(r.split_targets[h - 1])).size() > kMinSplitSize);
  }
  for (std::size_t i = 0; i < r.trace.records.size(); ++i) CHECK(r.trace.records[i].iter == static_cast<int>(i + 1));

  const auto again = adaptive_refinement(c.mesh, n0, c.data, cfg, c.truth);
  CHECK(again.field.parameters() == r.field.parameters());
  CHECK(again.split_targets == r.split_targets);
}

TEST_CASE("adaptive refinement stops at the element floor", "[strategies]") {
  const auto& c = small_case();
  // A 40-element zone can split once; its 10-element children cannot.
  const auto& el = c.mesh.inhomogeneity_elements();
  std::vector<int> patch{el[el.size() / 2]};
  std::set<int> seen(patch.begin(), patch.end());
  for (std::size_t head = 0; patch.size() < 40; ++head) {
    for (int nb : c.mesh.neighbours()[patch[head]]) {
      if (nb >= 0 && c.mesh.tag(nb) == Region::Inhomogeneity && patch.size() < 40 && seen.insert(nb).second) {
        patch.push_back(nb);
      }
    }
  }
  std::vector<int> rest;
  for (int t : el) {
    if (!seen.count(t)) rest.push_back(t);
  }
  const Zoning z(c.mesh.num_triangles(), {patch, rest});
  const auto n0 = IndexField::constant(z, 1.3);
  const auto r = adaptive_refinement(c.mesh, n0, c.data, c.cfg, c.truth, {0});
  CHECK(r.splits == 1);
  CHECK(r.field.size() == 5);
  CHECK(r.field.parameters()[1] == cplx(1.3, 0.0));
}

TEST_CASE("adaptive refinement passes over zones without a connected split", "[strategies]") {
  const auto& c = small_case();
  const auto& mesh = iscat::test::paper_mesh();
  // Zone 1 of this partition has spurs that rule out four connected parts.
  const auto z = partition_zones(mesh, 120, 1120);
  REQUIRE(z.zone(1).size() > kMinSplitSize);
  REQUIRE_FALSE(iscat::testing::four_way_split_exists(mesh, z.zone(1)));
  CHECK_THROWS_AS(split_zone(mesh, z, 1), NumericalFailure);

  StrategyConfig cfg = c.cfg;
  cfg.n_max = 10;
  const auto n0 = IndexField::constant(z, 1.3);
  const auto r = adaptive_refinement(mesh, n0, c.data, cfg, {}, {1});
  CHECK(r.splits == 0);
  CHECK(r.field.size() == 120);
}

TEST_CASE("combined strategy", "[strategies]") {
  const auto& c = small_case();
  const auto n0 = IndexField::constant(per_element_zoning(c.mesh), 1.3);
  StrategyConfig cfg = c.cfg;
  cfg.n_max = 16;
  const auto r = combined(c.mesh, n0, c.data, cfg, c.truth);
  REQUIRE(!r.history.empty());
  const std::set<int> sel(r.selected_elements.begin(), r.selected_elements.end());
  for (int t : c.mesh.inhomogeneity_elements()) {
    if (!sel.count(t)) CHECK(r.field.element_value(t) == cplx(1.3, 0.0));
  }
  CHECK(r.active_zones.size() <= cfg.n_max);
  CHECK(r.active_zones.size() == 1 + 3 * r.splits);
  std::set<int> root;
  for (int z : r.history.front().zone(0)) root.insert(z);
  CHECK(root == sel);

  const auto dir = std::filesystem::temp_directory_path() / "iscat_strategy_test";
  std::filesystem::create_directories(dir);
  save_selection((dir / "sel.txt").string(), r.selected_elements);
  save_zoning_history((dir / "z_").string(), r.history);
  std::ifstream in(dir / "sel.txt");
  std::vector<int> back;
  for (int v; in >> v;) back.push_back(v);
  CHECK(back == r.selected_elements);
  for (std::size_t h = 0; h < r.history.size(); ++h) {
    CHECK(load_zoning((dir / ("z_" + std::to_string(h) + ".zones")).string(), c.mesh.num_triangles()) ==
          r.history[h]);
  }
  std::filesystem::remove_all(dir);
}
