#include "iscat/scattering.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>

namespace iscat {

void FarFieldData::validate() const {
  if (values.rows() != static_cast<Eigen::Index>(measurement.size()) ||
      values.cols() != static_cast<Eigen::Index>(incidence.size())) {
    throw InvalidArgument("far-field data: matrix is " + std::to_string(values.rows()) + "x" +
                          std::to_string(values.cols()) + ", grids are " + std::to_string(measurement.size()) + "x" +
                          std::to_string(incidence.size()));
  }
  if (!values.allFinite()) throw InvalidArgument("far-field data: non-finite entry");
  if (!(wave_number > 0.0)) throw InvalidArgument("far-field data: wave number must be positive");
}

double weighted_norm(const CMatrix& values, const DirectionGrid& incidence, const DirectionGrid& measurement) {
  double sum = 0.0;
  for (Eigen::Index e = 0; e < values.cols(); ++e) {
    for (Eigen::Index m = 0; m < values.rows(); ++m) {
      sum += incidence.weight(e) * measurement.weight(m) * std::norm(values(m, e));
    }
  }
  return std::sqrt(sum);
}

CVector stack_rows(const CMatrix& values) {
  CVector out(values.size());
  const Eigen::Index me = values.cols();
  for (Eigen::Index m = 0; m < values.rows(); ++m) {
    for (Eigen::Index e = 0; e < me; ++e) out[m * me + e] = values(m, e);
  }
  return out;
}

RVector stacked_weights(const DirectionGrid& incidence, const DirectionGrid& measurement) {
  const auto me = static_cast<Eigen::Index>(incidence.size());
  RVector w(me * static_cast<Eigen::Index>(measurement.size()));
  for (std::size_t m = 0; m < measurement.size(); ++m) {
    for (std::size_t e = 0; e < incidence.size(); ++e) {
      w[static_cast<Eigen::Index>(m) * me + static_cast<Eigen::Index>(e)] = measurement.weight(m) * incidence.weight(e);
    }
  }
  return w;
}

void write_far_field(std::ostream& out, const FarFieldData& data) {
  data.validate();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "FARFIELD v1\n" << data.wave_number << ' ' << data.incidence.size() << ' ' << data.measurement.size() << '\n';
  for (std::size_t e = 0; e < data.incidence.size(); ++e) {
    out << data.incidence.angle(e) << ' ' << data.incidence.weight(e) << '\n';
  }
  for (std::size_t m = 0; m < data.measurement.size(); ++m) {
    out << data.measurement.angle(m) << ' ' << data.measurement.weight(m) << '\n';
  }
  for (Eigen::Index m = 0; m < data.values.rows(); ++m) {
    for (Eigen::Index e = 0; e < data.values.cols(); ++e) {
      if (e > 0) out << ' ';
      out << data.values(m, e).real() << ' ' << data.values(m, e).imag();
    }
    out << '\n';
  }
}

FarFieldData read_far_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "FARFIELD v1") {
    throw InvalidArgument("expected header 'FARFIELD v1', got '" + line + "'");
  }
  FarFieldData data;
  std::size_t me = 0;
  std::size_t mm = 0;
  if (!(in >> data.wave_number >> me >> mm)) throw InvalidArgument("far field: bad size line");
  auto read_grid = [&](std::size_t count) {
    std::vector<double> angles(count);
    std::vector<double> weights(count);
    for (std::size_t j = 0; j < count; ++j) {
      if (!(in >> angles[j] >> weights[j])) throw InvalidArgument("far field: truncated direction block");
    }
    return DirectionGrid::from_samples(std::move(angles), std::move(weights));
  };
  data.incidence = read_grid(me);
  data.measurement = read_grid(mm);
  data.values.resize(static_cast<Eigen::Index>(mm), static_cast<Eigen::Index>(me));
  for (Eigen::Index m = 0; m < data.values.rows(); ++m) {
    for (Eigen::Index e = 0; e < data.values.cols(); ++e) {
      double re = 0.0;
      double im = 0.0;
      if (!(in >> re >> im)) throw InvalidArgument("far field: truncated value block");
      data.values(m, e) = cplx(re, im);
    }
  }
  data.validate();
  return data;
}

void save_far_field(const std::string& path, const FarFieldData& data) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path);
  write_far_field(out, data);
}

FarFieldData load_far_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return read_far_field(in);
}

SolveDirections solve_directions(const DirectionGrid& incidence, const DirectionGrid& measurement) {
  SolveDirections out;
  for (std::size_t e = 0; e < incidence.size(); ++e) {
    out.incidence_slot.push_back(static_cast<int>(out.directions.size()));
    out.directions.push_back(incidence.direction(e));
  }
  for (std::size_t m = 0; m < measurement.size(); ++m) {
    const Vec2 d = -measurement.direction(m);
    int slot = -1;
    for (std::size_t s = 0; s < out.directions.size(); ++s) {
      if ((out.directions[s] - d).norm() <= kDirectionMatchTolerance) {
        slot = static_cast<int>(s);
        break;
      }
    }
    if (slot < 0) {
      slot = static_cast<int>(out.directions.size());
      out.directions.push_back(d);
    }
    out.reflected_slot.push_back(slot);
  }
  return out;
}

ForwardState::ForwardState(const TriangleMesh& mesh, std::vector<cplx> element_index, double k,
                           DirectionGrid incidence, DirectionGrid measurement, const SolverOptions& options)
    : mesh_(&mesh),
      k_(k),
      incidence_(std::move(incidence)),
      measurement_(std::move(measurement)),
      index_(std::move(element_index)),
      directions_(solve_directions(incidence_, measurement_)),
      quadrature_(mesh) {
  const HelmholtzSolver solver(mesh, index_, k, options);
  fields_ = solver.solve(directions_.directions);
  quad_values_.resize(static_cast<Eigen::Index>(quadrature_.size()), static_cast<Eigen::Index>(fields_.size()));
  for (std::size_t s = 0; s < fields_.size(); ++s) {
    quad_values_.col(static_cast<Eigen::Index>(s)) = quadrature_.evaluate(mesh, fields_[s]);
  }
}

FarFieldData ForwardState::far_field() const {
  const auto nq = static_cast<Eigen::Index>(quadrature_.size());
  const auto mm = static_cast<Eigen::Index>(measurement_.size());
  const auto me = static_cast<Eigen::Index>(incidence_.size());

  // F = E diag(c) U with E(m,q) = exp(-ik xhat_m . z_q), c_q = k^2 w_q (n_q - 1).
  CMatrix weighted(nq, me);
  for (Eigen::Index q = 0; q < nq; ++q) {
    const cplx c = k_ * k_ * quadrature_.weight(q) * (index_[quadrature_.element(q)] - 1.0);
    for (Eigen::Index e = 0; e < me; ++e) weighted(q, e) = c * quad_values_(q, directions_.incidence_slot[e]);
  }
  CMatrix phase(mm, nq);
  for (Eigen::Index m = 0; m < mm; ++m) {
    const Vec2 xhat = measurement_.direction(m);
    for (Eigen::Index q = 0; q < nq; ++q) phase(m, q) = std::exp(cplx(0.0, -k_ * xhat.dot(quadrature_.point(q))));
  }
  FarFieldData out;
  out.wave_number = k_;
  out.incidence = incidence_;
  out.measurement = measurement_;
  out.values = phase * weighted;
  if (!out.values.allFinite()) throw NumericalFailure("far field: non-finite values");
  return out;
}

CMatrix ForwardState::jacobian(const Zoning& zoning, std::span<const int> zones) const {
  if (zoning.num_triangles() != mesh_->num_triangles()) {
    throw InvalidArgument("jacobian: zoning does not belong to this mesh");
  }
  std::vector<int> column_of_zone(zoning.size(), -1);
  for (std::size_t j = 0; j < zones.size(); ++j) {
    if (zones[j] < 0 || static_cast<std::size_t>(zones[j]) >= zoning.size()) {
      throw InvalidArgument("jacobian: zone index out of range");
    }
    column_of_zone[zones[j]] = static_cast<int>(j);
  }
  const auto mm = static_cast<Eigen::Index>(measurement_.size());
  const auto me = static_cast<Eigen::Index>(incidence_.size());
  CMatrix jac = CMatrix::Zero(mm * me, static_cast<Eigen::Index>(zones.size()));
  std::vector<cplx> reflected(static_cast<std::size_t>(mm));
  std::vector<cplx> incident(static_cast<std::size_t>(me));
  for (std::size_t q = 0; q < quadrature_.size(); ++q) {
    const int z = zoning.zone_of(quadrature_.element(q));
    if (z < 0 || column_of_zone[z] < 0) continue;
    const auto qi = static_cast<Eigen::Index>(q);
    const double c = k_ * k_ * quadrature_.weight(q);
    for (Eigen::Index m = 0; m < mm; ++m) reflected[m] = c * quad_values_(qi, directions_.reflected_slot[m]);
    for (Eigen::Index e = 0; e < me; ++e) incident[e] = quad_values_(qi, directions_.incidence_slot[e]);
    auto col = jac.col(column_of_zone[z]);
    for (Eigen::Index m = 0; m < mm; ++m) {
      for (Eigen::Index e = 0; e < me; ++e) col[m * me + e] += reflected[m] * incident[e];
    }
  }
  return jac;
}

CMatrix ForwardState::jacobian(const Zoning& zoning) const {
  std::vector<int> all(zoning.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return jacobian(zoning, all);
}

CMatrix ForwardState::probe_values(const ProbePoints& probes) const {
  const auto me = static_cast<Eigen::Index>(incidence_.size());
  CMatrix out(static_cast<Eigen::Index>(probes.size()), me);
  for (Eigen::Index e = 0; e < me; ++e) {
    const ComplexField& u = incident_field(e);
    const CVector total = interpolate(*mesh_, u, probes);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const auto& tri = mesh_->triangles()[probes.elements[p]];
      const auto bary = barycentric(*mesh_, probes.elements[p], probes.points[p]);
      cplx inc_interp = 0.0;
      for (int i = 0; i < 3; ++i) inc_interp += bary[i] * u.incident(mesh_->vertices()[tri[i]]);
      out(static_cast<Eigen::Index>(p), e) = total[static_cast<Eigen::Index>(p)] - inc_interp + u.incident(probes.points[p]);
    }
  }
  return out;
}

FarFieldData evaluate_F(const TriangleMesh& mesh, std::span<const cplx> element_index, double k,
                        const DirectionGrid& incidence, const DirectionGrid& measurement, const SolverOptions& options) {
  // Only the incidence solves are needed here.
  const HelmholtzSolver solver(mesh, element_index, k, options);
  FarFieldData out;
  out.wave_number = k;
  out.incidence = incidence;
  out.measurement = measurement;
  out.values.resize(static_cast<Eigen::Index>(measurement.size()), static_cast<Eigen::Index>(incidence.size()));
  std::vector<Vec2> dirs;
  for (std::size_t e = 0; e < incidence.size(); ++e) dirs.push_back(incidence.direction(e));
  const auto fields = solver.solve(dirs);
  for (std::size_t e = 0; e < fields.size(); ++e) {
    out.values.col(static_cast<Eigen::Index>(e)) = far_field(mesh, element_index, k, fields[e], measurement);
  }
  return out;
}

FarFieldData evaluate_F(const TriangleMesh& mesh, const IndexField& n, double k, const DirectionGrid& incidence,
                        const DirectionGrid& measurement, const SolverOptions& options) {
  if (n.zoning().num_triangles() != mesh.num_triangles()) {
    throw InvalidArgument("evaluate_F: zoning does not belong to this mesh");
  }
  const auto values = n.element_values();
  return evaluate_F(mesh, values, k, incidence, measurement, options);
}

CMatrix assemble_jacobian(const TriangleMesh& mesh, const IndexField& n, double k, const DirectionGrid& incidence,
                          const DirectionGrid& measurement, const SolverOptions& options) {
  const ForwardState state(mesh, n.element_values(), k, incidence, measurement, options);
  return state.jacobian(n.zoning());
}

}  // namespace iscat
