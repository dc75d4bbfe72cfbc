#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "iscat/helmholtz.hpp"

namespace iscat {

// Far-field pattern sampled on incidence x measurement directions.
// values(m, e) = u_inf(theta_e, xhat_m).
struct FarFieldData {
  double wave_number = 0.0;
  DirectionGrid incidence;
  DirectionGrid measurement;
  CMatrix values;

  // Throws InvalidArgument if the matrix shape does not match the grids or
  // an entry is not finite.
  void validate() const;
};

// Weighted Frobenius norm sqrt(sum w_e w_m |v|^2).
double weighted_norm(const CMatrix& values, const DirectionGrid& incidence, const DirectionGrid& measurement);
inline double weighted_norm(const FarFieldData& data) {
  return weighted_norm(data.values, data.incidence, data.measurement);
}

// Stacked (measurement-major) layout used by residuals and Jacobians:
// row = m * M_e + e.
CVector stack_rows(const CMatrix& values);
RVector stacked_weights(const DirectionGrid& incidence, const DirectionGrid& measurement);

void write_far_field(std::ostream& out, const FarFieldData& data);
FarFieldData read_far_field(std::istream& in);
void save_far_field(const std::string& path, const FarFieldData& data);
FarFieldData load_far_field(const std::string& path);

// Directions needing a forward solve for the Jacobian: Gamma_e followed by
// the members of -Gamma_m not already present (vectors equal within 1e-12
// are identified).
struct SolveDirections {
  std::vector<Vec2> directions;
  std::vector<int> incidence_slot;
  std::vector<int> reflected_slot;
};
SolveDirections solve_directions(const DirectionGrid& incidence, const DirectionGrid& measurement);

inline constexpr double kDirectionMatchTolerance = 1e-12;

// All forward solves of one index on one mesh, for one pair of grids.
// Provides the far field, the zone Jacobian and field values at probes.
class ForwardState {
 public:
  ForwardState(const TriangleMesh& mesh, std::vector<cplx> element_index, double k, DirectionGrid incidence,
               DirectionGrid measurement, const SolverOptions& options = {});

  const TriangleMesh& mesh() const { return *mesh_; }
  double wave_number() const { return k_; }
  const DirectionGrid& incidence() const { return incidence_; }
  const DirectionGrid& measurement() const { return measurement_; }
  const std::vector<cplx>& element_index() const { return index_; }
  const SolveDirections& directions() const { return directions_; }
  std::size_t num_solves() const { return fields_.size(); }
  const std::vector<ComplexField>& fields() const { return fields_; }
  const ComplexField& incident_field(std::size_t e) const { return fields_[directions_.incidence_slot[e]]; }

  FarFieldData far_field() const;

  // Columns follow `zones` (indices into zoning); rows are measurement-major.
  CMatrix jacobian(const Zoning& zoning, std::span<const int> zones) const;
  CMatrix jacobian(const Zoning& zoning) const;

  // u_n(theta_e, z) at every probe: P x M_e. The incident wave is evaluated
  // exactly and the scattered part interpolated.
  CMatrix probe_values(const ProbePoints& probes) const;

 private:
  const TriangleMesh* mesh_;
  double k_;
  DirectionGrid incidence_;
  DirectionGrid measurement_;
  std::vector<cplx> index_;
  SolveDirections directions_;
  DomainQuadrature quadrature_;
  std::vector<ComplexField> fields_;
  CMatrix quad_values_;  // Q x num_solves
};

FarFieldData evaluate_F(const TriangleMesh& mesh, std::span<const cplx> element_index, double k,
                        const DirectionGrid& incidence, const DirectionGrid& measurement,
                        const SolverOptions& options = {});
FarFieldData evaluate_F(const TriangleMesh& mesh, const IndexField& n, double k, const DirectionGrid& incidence,
                        const DirectionGrid& measurement, const SolverOptions& options = {});

// Jacobian with respect to every zone parameter of n.
CMatrix assemble_jacobian(const TriangleMesh& mesh, const IndexField& n, double k, const DirectionGrid& incidence,
                          const DirectionGrid& measurement, const SolverOptions& options = {});

}  // namespace iscat
