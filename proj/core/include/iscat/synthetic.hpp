#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iscat/scattering.hpp"

namespace iscat {

// A disc inside D carrying a constant index. Later discs override earlier
// ones. Perturbation discs are absent from the reference index.
struct IndexDisc {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  cplx value = 1.0;
  bool perturbation = false;
};

// Exact index n* on the disc D of the given radius, 1 outside D.
struct Scenario {
  std::string name;
  double radius = 1.0;
  cplx background = 1.0;
  // Initial guess n0 used by the strategies: either the background constant
  // (reference_is_background) or n* with the perturbation discs removed.
  bool reference_is_background = true;
  std::vector<IndexDisc> discs;

  cplx value_at(const Vec2& x) const;
  cplx reference_at(const Vec2& x) const;
  bool is_real() const;

  // Values at every triangle centroid (1 outside the D-tagged triangles).
  std::vector<cplx> sample(const TriangleMesh& mesh) const;
  std::vector<cplx> sample_reference(const TriangleMesh& mesh) const;
};

// "disc-in-disc", "homogeneous" or "complex-multizone".
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

// Far fields of the sampled n* on the data mesh.
FarFieldData make_truth(const Scenario& scenario, const TriangleMesh& data_mesh, double k,
                        const DirectionGrid& incidence, const DirectionGrid& measurement,
                        const SolverOptions& options = {});

// Adds i.i.d. complex Gaussian noise rescaled so that the weighted norm of
// the perturbation equals epsilon times the weighted norm of u.
FarFieldData add_noise(const FarFieldData& u, double epsilon, std::uint64_t seed);

}  // namespace iscat
