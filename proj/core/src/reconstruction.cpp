#include "iscat/reconstruction.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include <Eigen/Cholesky>

namespace iscat {

void GNConfig::validate() const {
  if (!(c2 > 0.0)) throw InvalidArgument("gauss-newton: c2 must be positive");
  if (!(stop_tol > 0.0)) throw InvalidArgument("gauss-newton: stop_tol must be positive");
  if (max_iters < 1) throw InvalidArgument("gauss-newton: max_iters must be at least 1");
  if (!std::isfinite(c1)) throw InvalidArgument("gauss-newton: c1 must be finite");
}

void write_trace_csv(std::ostream& out, const GNTrace& trace) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "iter,fidelity,step,rel_error\n";
  for (const auto& r : trace.records) {
    out << r.iter << ',' << r.fidelity << ',' << r.step << ',';
    if (std::isfinite(r.rel_error)) out << r.rel_error;
    out << '\n';
  }
}

void save_trace_csv(const std::string& path, const GNTrace& trace) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path);
  write_trace_csv(out, trace);
}

double relative_error(const TriangleMesh& mesh, std::span<const cplx> n, std::span<const cplx> truth) {
  if (n.size() != mesh.num_triangles() || truth.size() != mesh.num_triangles()) {
    throw InvalidArgument("relative_error: one value per triangle required");
  }
  double diff = 0.0;
  double ref = 0.0;
  for (int t : mesh.inhomogeneity_elements()) {
    diff += mesh.area(t) * std::norm(n[t] - truth[t]);
    ref += mesh.area(t) * std::norm(truth[t]);
  }
  if (!(ref > 0.0)) throw InvalidArgument("relative_error: truth has zero norm");
  return std::sqrt(diff / ref);
}

NormalEquations assemble_normal_equations(const CMatrix& jacobian, const RVector& row_weights,
                                          const RVector& zone_areas, const CVector& residual,
                                          const CVector& delta, double alpha, bool real_constraint) {
  const Eigen::Index rows = jacobian.rows();
  const Eigen::Index cols = jacobian.cols();
  if (row_weights.size() != rows || residual.size() != rows || zone_areas.size() != cols || delta.size() != cols) {
    throw InvalidArgument("normal equations: inconsistent sizes");
  }
  const RVector sw = row_weights.cwiseSqrt();
  const RVector sa = zone_areas.cwiseSqrt();
  const CMatrix jw = sw.asDiagonal() * jacobian * sa.cwiseInverse().asDiagonal();
  const CVector y_p = sa.cast<cplx>().cwiseProduct(delta);
  const CVector b = -(sw.cast<cplx>().cwiseProduct(residual) - jw * y_p);

  NormalEquations out;
  if (real_constraint) {
    // Re(Jw^H Jw) = Re(Jw)^T Re(Jw) + Im(Jw)^T Im(Jw).
    RMatrix stacked(2 * rows, cols);
    stacked.topRows(rows) = jw.real();
    stacked.bottomRows(rows) = jw.imag();
    RMatrix h = RMatrix::Zero(cols, cols);
    h.selfadjointView<Eigen::Lower>().rankUpdate(stacked.transpose());
    h.triangularView<Eigen::StrictlyUpper>() = h.transpose();
    h.diagonal().array() += alpha;
    out.matrix = h.cast<cplx>();
    RVector rb(2 * rows);
    rb.head(rows) = b.real();
    rb.tail(rows) = b.imag();
    out.rhs = (stacked.transpose() * rb).cast<cplx>();
  } else {
    CMatrix h = CMatrix::Zero(cols, cols);
    h.selfadjointView<Eigen::Lower>().rankUpdate(jw.adjoint());
    h.triangularView<Eigen::StrictlyUpper>() = h.adjoint();
    h.diagonal().array() += alpha;
    out.matrix = std::move(h);
    out.rhs = jw.adjoint() * b;
  }
  return out;
}

namespace {

double l2_over_d(const TriangleMesh& mesh, const std::vector<cplx>& a, const std::vector<cplx>* b) {
  double sum = 0.0;
  for (int t : mesh.inhomogeneity_elements()) {
    const cplx v = b != nullptr ? a[t] - (*b)[t] : a[t];
    sum += mesh.area(t) * std::norm(v);
  }
  return std::sqrt(sum);
}

}  // namespace

GNResult gauss_newton(const TriangleMesh& mesh, const IndexField& n0, const FarFieldData& data, const GNConfig& cfg,
                      const GNOptions& options) {
  cfg.validate();
  data.validate();
  const Zoning& zoning = n0.zoning();
  if (zoning.num_triangles() != mesh.num_triangles()) {
    throw InvalidArgument("gauss-newton: zoning does not belong to this mesh");
  }
  std::vector<int> active = options.active_zones;
  if (active.empty()) {
    active.resize(zoning.size());
    for (std::size_t i = 0; i < active.size(); ++i) active[i] = static_cast<int>(i);
  }
  for (int z : active) {
    if (z < 0 || static_cast<std::size_t>(z) >= zoning.size()) {
      throw InvalidArgument("gauss-newton: active zone out of range");
    }
  }
  const bool have_truth = !options.truth.empty();
  if (have_truth && options.truth.size() != mesh.num_triangles()) {
    throw InvalidArgument("gauss-newton: truth needs one value per triangle");
  }

  const double data_norm = weighted_norm(data);
  const double c1 = cfg.c1 > 0.0 ? cfg.c1 : 1.0 / (data_norm * data_norm);
  if (!std::isfinite(c1)) throw InvalidArgument("gauss-newton: zero data with automatic c1");
  const double alpha = cfg.c2 / (2.0 * c1);

  const auto na = static_cast<Eigen::Index>(active.size());
  RVector areas(na);
  for (Eigen::Index j = 0; j < na; ++j) {
    double a = 0.0;
    for (int t : zoning.zone(active[j])) a += mesh.area(t);
    areas[j] = a;
  }
  const RVector row_weights = stacked_weights(data.incidence, data.measurement);
  const CVector data_rows = stack_rows(data.values);

  auto make_state = [&](const IndexField& n) {
    return std::make_shared<const ForwardState>(mesh, n.element_values(), data.wave_number, data.incidence,
                                                data.measurement, cfg.solver);
  };

  GNResult result;
  result.field = n0;
  if (!options.start.empty()) {
    if (options.start.size() != n0.size()) throw InvalidArgument("gauss-newton: start needs one value per zone");
    result.field.parameters() = options.start;
  }
  result.state = make_state(result.field);
  CVector residual = stack_rows(result.state->far_field().values) - data_rows;
  if (!residual.allFinite()) throw NumericalFailure("gauss-newton: non-finite residual at the initial guess");

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const CMatrix jac = result.state->jacobian(zoning, active);
    CVector delta(na);
    for (Eigen::Index j = 0; j < na; ++j) delta[j] = result.field.parameters()[active[j]] - n0.parameters()[active[j]];

    const NormalEquations eq =
        assemble_normal_equations(jac, row_weights, areas, residual, delta, alpha, cfg.real_constraint);
    CVector y;
    if (cfg.real_constraint) {
      Eigen::LLT<RMatrix> llt(eq.matrix.real());
      if (llt.info() != Eigen::Success) throw NumericalFailure("gauss-newton: normal matrix not positive definite");
      y = llt.solve(eq.rhs.real()).cast<cplx>();
    } else {
      Eigen::LLT<CMatrix> llt(eq.matrix);
      if (llt.info() != Eigen::Success) throw NumericalFailure("gauss-newton: normal matrix not positive definite");
      y = llt.solve(eq.rhs);
    }
    if (!y.allFinite()) throw NumericalFailure("gauss-newton: non-finite update");

    // Inactive zones keep their starting values bit-exactly.
    IndexField next = result.field;
    for (Eigen::Index j = 0; j < na; ++j) {
      next.parameters()[active[j]] = n0.parameters()[active[j]] + y[j] / std::sqrt(areas[j]);
    }

    const auto prev_values = result.field.element_values();
    const auto next_values = next.element_values();
    const double step = l2_over_d(mesh, next_values, &prev_values) / (1.0 + l2_over_d(mesh, prev_values, nullptr));

    result.field = std::move(next);
    result.state = make_state(result.field);
    residual = stack_rows(result.state->far_field().values) - data_rows;
    if (!residual.allFinite()) throw NumericalFailure("gauss-newton: non-finite residual");

    GNRecord rec;
    rec.iter = iter;
    rec.step = step;
    {
      double sum = 0.0;
      for (Eigen::Index r = 0; r < residual.size(); ++r) sum += row_weights[r] * std::norm(residual[r]);
      rec.fidelity = c1 * sum;
    }
    rec.rel_error = have_truth ? relative_error(mesh, next_values, options.truth)
                               : std::numeric_limits<double>::quiet_NaN();
    rec.parameters = result.field.parameters();
    result.trace.records.push_back(std::move(rec));

    if (step < cfg.stop_tol) {
      result.trace.converged = true;
      break;
    }
  }
  return result;
}

void write_index_field(std::ostream& out, const TriangleMesh& mesh, const IndexField& n) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "element,x,y,zone,re,im\n";
  for (int t : mesh.inhomogeneity_elements()) {
    const Vec2 c = mesh.centroid(t);
    const cplx v = n.element_value(t);
    out << t << ',' << c.x() << ',' << c.y() << ',' << n.zoning().zone_of(t) << ',' << v.real() << ',' << v.imag()
        << '\n';
  }
}

void save_index_field(const std::string& path, const TriangleMesh& mesh, const IndexField& n) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path);
  write_index_field(out, mesh, n);
}

}  // namespace iscat
