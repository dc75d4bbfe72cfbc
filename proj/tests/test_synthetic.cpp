#include <catch_amalgamated.hpp>

#include "iscat/synthetic.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace iscat;
using iscat::test::coarse_mesh;
using iscat::test::paper_mesh;

TEST_CASE("built-in scenarios", "[synthetic]") {
  const auto dd = builtin_scenario("disc-in-disc");
  CHECK(dd.is_real());
  CHECK(dd.value_at({0.3, 0.3}) == cplx(1.6, 0.0));
  CHECK(dd.value_at({0.3, 0.59}) == cplx(1.6, 0.0));
  CHECK(dd.value_at({-0.5, 0.0}) == cplx(1.3, 0.0));
  CHECK(dd.value_at({1.5, 0.0}) == cplx(1.0, 0.0));
  CHECK(dd.reference_at({0.3, 0.3}) == cplx(1.3, 0.0));

  const auto hom = builtin_scenario("homogeneous");
  CHECK(hom.value_at({0.3, 0.3}) == cplx(1.3, 0.0));

  const auto cm = builtin_scenario("complex-multizone");
  CHECK_FALSE(cm.is_real());
  const Vec2 centre(0.05, 0.1);
  CHECK(cm.value_at(centre).imag() > 0.0);
  CHECK(cm.value_at(centre) != cm.reference_at(centre));
  // Away from the perturbation the reference is the truth.
  CHECK(cm.value_at({-0.45, 0.35}) == cm.reference_at({-0.45, 0.35}));
  CHECK(cm.value_at({-0.45, 0.35}) != cm.background);

  CHECK_THROWS_AS(builtin_scenario("nope"), InvalidArgument);
  CHECK(builtin_scenario_names().size() == 3);
}

TEST_CASE("perturbation spans enough reconstruction elements", "[synthetic]") {
  const auto& mesh = paper_mesh();
  for (const auto& name : {"disc-in-disc", "complex-multizone"}) {
    const auto sc = builtin_scenario(name);
    std::vector<int> omega;
    for (int t : mesh.inhomogeneity_elements()) {
      if (sc.value_at(mesh.centroid(t)) != sc.reference_at(mesh.centroid(t))) omega.push_back(t);
    }
    CHECK(omega.size() >= 4);
    CHECK(is_edge_connected(mesh, omega));
  }
}

TEST_CASE("homogeneous truth matches the disc series", "[synthetic][oracle]") {
  const auto& mesh = paper_mesh();
  const auto g = DirectionGrid::full(30);
  const auto data = make_truth(builtin_scenario("homogeneous"), mesh, 5.0, DirectionGrid::full(3), g);
  const test::DiscSeries exact(5.0, 1.3, 1.0, 40);
  double err = 0.0;
  double norm = 0.0;
  for (std::size_t m = 0; m < g.size(); ++m) {
    const cplx e = exact.far_field(g.angle(m));
    err += std::norm(data.values(static_cast<Eigen::Index>(m), 0) - e);
    norm += std::norm(e);
  }
  CHECK(std::sqrt(err / norm) < 0.02);
}

TEST_CASE("noise is calibrated exactly", "[synthetic][noise]") {
  const auto& mesh = coarse_mesh();
  const auto g = DirectionGrid::full(10);
  const DirectionGrid gm(12, 0.0, 1.5 * kPi);
  const auto u = make_truth(builtin_scenario("disc-in-disc"), mesh, 5.0, g, gm);
  CHECK(make_truth(builtin_scenario("disc-in-disc"), mesh, 5.0, g, gm).values == u.values);

  const auto same = add_noise(u, 0.0, 1);
  CHECK(same.values == u.values);

  const double norm = weighted_norm(u);
  for (double eps : {0.01, 0.02, 0.05}) {
    const auto a = add_noise(u, eps, 7);
    const auto b = add_noise(u, eps, 8);
    const double ra = weighted_norm(a.values - u.values, g, gm) / norm;
    const double rb = weighted_norm(b.values - u.values, g, gm) / norm;
    CHECK(std::abs(ra - eps) <= 1e-12);
    CHECK(std::abs(rb - eps) <= 1e-12);
    CHECK(a.values != b.values);
    CHECK(add_noise(u, eps, 7).values == a.values);
  }
  CHECK_THROWS_AS(add_noise(u, -0.1, 1), InvalidArgument);
}
