#include "iscat/synthetic.hpp"

#include <random>

namespace iscat {

namespace {

cplx evaluate(const Scenario& s, const Vec2& x, bool with_perturbation) {
  if (x.norm() >= s.radius) return 1.0;
  cplx value = s.background;
  for (const auto& d : s.discs) {
    if (d.perturbation && !with_perturbation) continue;
    if ((x - d.center).norm() < d.radius) value = d.value;
  }
  return value;
}

std::vector<cplx> sample_mesh(const Scenario& s, const TriangleMesh& mesh, bool with_perturbation) {
  std::vector<cplx> values(mesh.num_triangles(), cplx(1.0, 0.0));
  for (int t : mesh.inhomogeneity_elements()) values[t] = evaluate(s, mesh.centroid(t), with_perturbation);
  return values;
}

}  // namespace

cplx Scenario::value_at(const Vec2& x) const { return evaluate(*this, x, true); }

cplx Scenario::reference_at(const Vec2& x) const {
  if (reference_is_background) return x.norm() < radius ? background : cplx(1.0);
  return evaluate(*this, x, false);
}

bool Scenario::is_real() const {
  if (background.imag() != 0.0) return false;
  for (const auto& d : discs) {
    if (d.value.imag() != 0.0) return false;
  }
  return true;
}

std::vector<cplx> Scenario::sample(const TriangleMesh& mesh) const { return sample_mesh(*this, mesh, true); }

std::vector<cplx> Scenario::sample_reference(const TriangleMesh& mesh) const {
  std::vector<cplx> values(mesh.num_triangles(), cplx(1.0, 0.0));
  for (int t : mesh.inhomogeneity_elements()) values[t] = reference_at(mesh.centroid(t));
  return values;
}

Scenario builtin_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  if (name == "disc-in-disc") {
    s.background = 1.3;
    s.discs.push_back({Vec2(0.3, 0.3), 0.3, 1.6, true});
  } else if (name == "homogeneous") {
    s.background = 1.3;
  } else if (name == "complex-multizone") {
    // Stand-in values: an absorbing background with two known inclusions and
    // a strongly absorbing central perturbation unknown to n0.
    s.background = cplx(1.25, 0.05);
    s.reference_is_background = false;
    s.discs.push_back({Vec2(-0.45, 0.35), 0.3, cplx(1.45, 0.1), false});
    s.discs.push_back({Vec2(0.4, -0.45), 0.3, cplx(1.1, 0.15), false});
    s.discs.push_back({Vec2(0.05, 0.1), 0.3, cplx(1.55, 0.3), true});
  } else {
    throw InvalidArgument("unknown scenario '" + name + "'");
  }
  return s;
}

std::vector<std::string> builtin_scenario_names() { return {"disc-in-disc", "homogeneous", "complex-multizone"}; }

FarFieldData make_truth(const Scenario& scenario, const TriangleMesh& data_mesh, double k,
                        const DirectionGrid& incidence, const DirectionGrid& measurement,
                        const SolverOptions& options) {
  const auto values = scenario.sample(data_mesh);
  return evaluate_F(data_mesh, values, k, incidence, measurement, options);
}

FarFieldData add_noise(const FarFieldData& u, double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0)) throw InvalidArgument("add_noise: epsilon must be non-negative");
  if (epsilon == 0.0) return u;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix noise(u.values.rows(), u.values.cols());
  for (Eigen::Index e = 0; e < noise.cols(); ++e) {
    for (Eigen::Index m = 0; m < noise.rows(); ++m) {
      const double re = normal(rng);
      const double im = normal(rng);
      noise(m, e) = cplx(re, im);
    }
  }
  const double target = epsilon * weighted_norm(u);
  const double current = weighted_norm(noise, u.incidence, u.measurement);
  if (!(current > 0.0)) throw NumericalFailure("add_noise: degenerate noise draw");
  FarFieldData out = u;
  out.values += (target / current) * noise;
  return out;
}

}  // namespace iscat
