#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "iscat/directions.hpp"
#include "iscat/index_field.hpp"
#include "iscat/mesh.hpp"
#include "iscat/zoning.hpp"

namespace iscat {

// Far-field normalisation: u = u_inc + gamma e^{ik|x|} |x|^{-(d-1)/2} u_inf.
cplx far_field_gamma(double k, int dimension = 2);

struct SolverOptions {
  // Nominal normal-incidence reflection of the PML; fixes the peak damping
  // of the quadratic profile.
  double pml_reflection = 1e-6;
};

// Peak PML damping sigma0 for a quadratic profile of thickness L.
double pml_sigma0(double thickness, double reflection);

// Nodal values of a total field u = u_inc + u_s for one incidence direction.
class ComplexField {
 public:
  ComplexField() = default;
  ComplexField(Vec2 direction, double wave_number, CVector nodal_total)
      : direction_(std::move(direction)), k_(wave_number), values_(std::move(nodal_total)) {}

  const Vec2& direction() const { return direction_; }
  double wave_number() const { return k_; }
  const CVector& values() const { return values_; }

  cplx incident(const Vec2& x) const { return std::exp(cplx(0.0, k_ * direction_.dot(x))); }

 private:
  Vec2 direction_ = Vec2::UnitX();
  double k_ = 0.0;
  CVector values_;
};

// Three-point Gauss rule (degree 2) on every D-triangle. Points are ordered
// element by element following mesh.inhomogeneity_elements().
class DomainQuadrature {
 public:
  explicit DomainQuadrature(const TriangleMesh& mesh);

  std::size_t size() const { return points_.size(); }
  const Vec2& point(std::size_t q) const { return points_[q]; }
  double weight(std::size_t q) const { return weights_[q]; }
  int element(std::size_t q) const { return elements_[q]; }
  const std::vector<Vec2>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<int>& elements() const { return elements_; }

  // Total field at every point: P1 interpolation of the scattered part plus
  // the exact incident wave.
  CVector evaluate(const TriangleMesh& mesh, const ComplexField& u) const;

  static constexpr std::array<std::array<double, 3>, 3> kBarycentric{{
      {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
      {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
      {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
  }};

 private:
  std::vector<Vec2> points_;
  std::vector<double> weights_;
  std::vector<int> elements_;
};

// P1 finite elements with Cartesian PML for the scattered field
//   div(grad u_s) + k^2 n u_s = -k^2 (n - 1) u_inc,  u_s = 0 on the box.
// The system matrix depends on the index only, so it is factored once and
// reused for every incidence direction.
class HelmholtzSolver {
 public:
  HelmholtzSolver(const TriangleMesh& mesh, std::span<const cplx> element_index, double k,
                  const SolverOptions& options = {});
  ~HelmholtzSolver();
  HelmholtzSolver(HelmholtzSolver&&) noexcept;
  HelmholtzSolver& operator=(HelmholtzSolver&&) noexcept;

  ComplexField solve(const Vec2& direction) const;
  // Independent solves, run in parallel when OpenMP is enabled.
  std::vector<ComplexField> solve(std::span<const Vec2> directions) const;

  // Scattered-field solve for a source scaled by `amplitude`.
  ComplexField solve_scaled(const Vec2& direction, cplx amplitude) const;

  const TriangleMesh& mesh() const { return *mesh_; }
  double wave_number() const { return k_; }
  const std::vector<cplx>& element_index() const { return index_; }

 private:
  struct Factorization;

  const TriangleMesh* mesh_;
  double k_;
  std::vector<cplx> index_;
  std::vector<int> dof_of_vertex_;
  std::unique_ptr<Factorization> factorization_;
  std::unique_ptr<DomainQuadrature> quadrature_;
};

ComplexField solve_total_field(const TriangleMesh& mesh, const IndexField& n, double k, const Vec2& direction,
                               const SolverOptions& options = {});

// Far-field pattern of u over the measurement grid by quadrature of
//   k^2 (n - 1) e^{-ik xhat.z} u(z) over D.
CVector far_field(const TriangleMesh& mesh, std::span<const cplx> element_index, double k, const ComplexField& u,
                  const DirectionGrid& measurement);

// Barycentric interpolation of nodal values at probe points. Throws
// InvalidArgument when a point lies outside its owning triangle.
CVector interpolate(const TriangleMesh& mesh, const ComplexField& u, const ProbePoints& probes);

}  // namespace iscat
