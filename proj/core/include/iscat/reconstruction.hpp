#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "iscat/scattering.hpp"

namespace iscat {

struct GNConfig {
  // Fidelity weight; a value <= 0 means 1 / ||data||^2.
  double c1 = 0.0;
  double c2 = 1e-2;
  double stop_tol = 1e-4;
  int max_iters = 20;
  bool real_constraint = false;
  SolverOptions solver;

  void validate() const;
};

struct GNRecord {
  int iter = 0;
  double fidelity = 0.0;  // c1 ||F(n_p) - data||^2 at the new iterate
  double step = 0.0;      // ||n_p - n_{p-1}|| / (1 + ||n_{p-1}||)
  double rel_error = 0.0; // NaN when the truth is unknown
  std::vector<cplx> parameters;
};

struct GNTrace {
  std::vector<GNRecord> records;
  bool converged = false;
};

void write_trace_csv(std::ostream& out, const GNTrace& trace);
void save_trace_csv(const std::string& path, const GNTrace& trace);

struct GNOptions {
  // Zones being reconstructed; empty means all. Other zones stay at n0.
  std::vector<int> active_zones;
  // Per-triangle truth on the reconstruction mesh for the error column.
  std::vector<cplx> truth;
  // Starting iterate on n0's zoning; n0 itself when empty. n0 stays the
  // Tikhonov anchor.
  std::vector<cplx> start;
};

struct GNResult {
  IndexField field;
  GNTrace trace;
  // Forward solves at the returned field, reusable for localization.
  std::shared_ptr<const ForwardState> state;
};

// Regularized Gauss-Newton iteration anchored at n0. Zones outside the
// active set keep the starting values.
GNResult gauss_newton(const TriangleMesh& mesh, const IndexField& n0, const FarFieldData& data, const GNConfig& cfg,
                      const GNOptions& options = {});

// Symmetrized normal equations of one Gauss-Newton step, in the variable
// y = sqrt(area) * (n_{p+1} - n0):
//   (Jw^H Jw + alpha I) y = -Jw^H (r_w - Jw y_p)
// with Jw = diag(sqrt(w)) J diag(1/sqrt(area)) and r_w = sqrt(w) r. With the
// real constraint both sides are replaced by their real parts.
struct NormalEquations {
  CMatrix matrix;
  CVector rhs;
};
NormalEquations assemble_normal_equations(const CMatrix& jacobian, const RVector& row_weights,
                                          const RVector& zone_areas, const CVector& residual,
                                          const CVector& delta, double alpha, bool real_constraint);

// ||n - truth||_{L2(D)} / ||truth||_{L2(D)} from per-triangle values.
double relative_error(const TriangleMesh& mesh, std::span<const cplx> n, std::span<const cplx> truth);

void write_index_field(std::ostream& out, const TriangleMesh& mesh, const IndexField& n);
void save_index_field(const std::string& path, const TriangleMesh& mesh, const IndexField& n);

}  // namespace iscat
