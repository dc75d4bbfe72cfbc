#include "iscat/helmholtz.hpp"

#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace iscat {

cplx far_field_gamma(double k, int dimension) {
  if (dimension == 2) return std::exp(cplx(0.0, kPi / 4.0)) / std::sqrt(8.0 * kPi * k);
  if (dimension == 3) return cplx(1.0 / (4.0 * kPi), 0.0);
  throw InvalidArgument("far_field_gamma: dimension must be 2 or 3");
}

double pml_sigma0(double thickness, double reflection) {
  // R = exp(-2 int_0^L sigma0 (t/L)^2 dt) = exp(-2 sigma0 L / 3)
  return -1.5 * std::log(reflection) / thickness;
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<cplx>;

struct Stretch {
  cplx sx;
  cplx sy;
};

Stretch stretch_at(const Vec2& x, const BoxGeometry& box, double sigma0, double k) {
  auto profile = [&](double c) {
    const double depth = std::abs(c) - box.pml_inner;
    if (depth <= 0.0) return 0.0;
    const double r = depth / box.pml_thickness;
    return sigma0 * r * r;
  };
  return {cplx(1.0, profile(x.x()) / k), cplx(1.0, profile(x.y()) / k)};
}

}  // namespace

DomainQuadrature::DomainQuadrature(const TriangleMesh& mesh) {
  const auto& elements = mesh.inhomogeneity_elements();
  points_.reserve(3 * elements.size());
  weights_.reserve(3 * elements.size());
  elements_.reserve(3 * elements.size());
  for (int t : elements) {
    const auto& tri = mesh.triangles()[t];
    const double w = mesh.area(t) / 3.0;
    for (const auto& b : kBarycentric) {
      points_.push_back(b[0] * mesh.vertices()[tri[0]] + b[1] * mesh.vertices()[tri[1]] +
                        b[2] * mesh.vertices()[tri[2]]);
      weights_.push_back(w);
      elements_.push_back(t);
    }
  }
}

CVector DomainQuadrature::evaluate(const TriangleMesh& mesh, const ComplexField& u) const {
  CVector out(static_cast<Eigen::Index>(size()));
  const auto& verts = mesh.vertices();
  for (std::size_t e = 0; e < size() / 3; ++e) {
    const auto& tri = mesh.triangles()[elements_[3 * e]];
    std::array<cplx, 3> scattered{};
    for (int i = 0; i < 3; ++i) scattered[i] = u.values()[tri[i]] - u.incident(verts[tri[i]]);
    for (int q = 0; q < 3; ++q) {
      const auto& b = kBarycentric[q];
      const std::size_t idx = 3 * e + q;
      out[static_cast<Eigen::Index>(idx)] =
          b[0] * scattered[0] + b[1] * scattered[1] + b[2] * scattered[2] + u.incident(points_[idx]);
    }
  }
  return out;
}

struct HelmholtzSolver::Factorization {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
};

HelmholtzSolver::~HelmholtzSolver() = default;
HelmholtzSolver::HelmholtzSolver(HelmholtzSolver&&) noexcept = default;
HelmholtzSolver& HelmholtzSolver::operator=(HelmholtzSolver&&) noexcept = default;

HelmholtzSolver::HelmholtzSolver(const TriangleMesh& mesh, std::span<const cplx> element_index, double k,
                                 const SolverOptions& options)
    : mesh_(&mesh), k_(k), index_(element_index.begin(), element_index.end()) {
  if (!(k > 0.0)) throw InvalidArgument("helmholtz: wave number must be positive");
  if (index_.size() != mesh.num_triangles()) {
    throw InvalidArgument("helmholtz: index has " + std::to_string(index_.size()) + " values for " +
                          std::to_string(mesh.num_triangles()) + " triangles");
  }
  for (std::size_t t = 0; t < index_.size(); ++t) {
    if (!std::isfinite(index_[t].real()) || !std::isfinite(index_[t].imag())) {
      throw InvalidArgument("helmholtz: non-finite index value");
    }
    if (mesh.tag(static_cast<int>(t)) != Region::Inhomogeneity && index_[t] != cplx(1.0, 0.0)) {
      throw InvalidArgument("helmholtz: index must equal 1 outside the inhomogeneity");
    }
  }

  dof_of_vertex_.assign(mesh.num_vertices(), 0);
  for (int v : mesh.boundary_vertices()) dof_of_vertex_[v] = -1;
  int ndof = 0;
  for (auto& d : dof_of_vertex_) {
    if (d == 0) d = ndof++;
  }

  const BoxGeometry& box = mesh.box();
  const double sigma0 = pml_sigma0(box.pml_thickness, options.pml_reflection);
  const double k2 = k * k;
  const auto& verts = mesh.vertices();

  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(9 * mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Vec2& a = verts[tri[0]];
    const Vec2& b = verts[tri[1]];
    const Vec2& c = verts[tri[2]];
    const double area = mesh.area(static_cast<int>(t));
    // Gradients of the barycentric coordinates.
    std::array<Vec2, 3> grad{Vec2(b.y() - c.y(), c.x() - b.x()), Vec2(c.y() - a.y(), a.x() - c.x()),
                             Vec2(a.y() - b.y(), b.x() - a.x())};
    for (auto& g : grad) g /= 2.0 * area;

    cplx cx = 0.0;
    cplx cy = 0.0;
    std::array<cplx, 3> mass_coef{};
    for (int q = 0; q < 3; ++q) {
      const auto& bq = DomainQuadrature::kBarycentric[q];
      const Vec2 x = bq[0] * a + bq[1] * b + bq[2] * c;
      const Stretch s = mesh.tag(static_cast<int>(t)) == Region::Pml ? stretch_at(x, box, sigma0, k)
                                                                      : Stretch{1.0, 1.0};
      cx += s.sy / s.sx / 3.0;
      cy += s.sx / s.sy / 3.0;
      mass_coef[q] = index_[t] * s.sx * s.sy;
    }

    for (int i = 0; i < 3; ++i) {
      const int di = dof_of_vertex_[tri[i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int dj = dof_of_vertex_[tri[j]];
        if (dj < 0) continue;
        const cplx stiff = area * (cx * grad[i].x() * grad[j].x() + cy * grad[i].y() * grad[j].y());
        cplx mass = 0.0;
        for (int q = 0; q < 3; ++q) {
          const auto& bq = DomainQuadrature::kBarycentric[q];
          mass += (area / 3.0) * mass_coef[q] * bq[i] * bq[j];
        }
        triplets.emplace_back(di, dj, -stiff + k2 * mass);
      }
    }
  }

  SparseMatrix system(ndof, ndof);
  system.setFromTriplets(triplets.begin(), triplets.end());
  system.makeCompressed();

  factorization_ = std::make_unique<Factorization>();
  factorization_->lu.analyzePattern(system);
  factorization_->lu.factorize(system);
  if (factorization_->lu.info() != Eigen::Success) {
    throw NumericalFailure("helmholtz: sparse LU factorization failed (" + factorization_->lu.lastErrorMessage() +
                           ") for " + std::to_string(ndof) + " unknowns");
  }
  quadrature_ = std::make_unique<DomainQuadrature>(mesh);
}

ComplexField HelmholtzSolver::solve(const Vec2& direction) const { return solve_scaled(direction, 1.0); }

ComplexField HelmholtzSolver::solve_scaled(const Vec2& direction, cplx amplitude) const {
  const auto& mesh = *mesh_;
  const auto& verts = mesh.vertices();
  const Eigen::Index ndof = factorization_->lu.rows();
  CVector rhs = CVector::Zero(ndof);
  const double k2 = k_ * k_;
  const auto& quad = *quadrature_;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const int t = quad.element(q);
    const cplx contrast = index_[t] - 1.0;
    if (contrast == cplx(0.0, 0.0)) continue;
    const auto& tri = mesh.triangles()[t];
    const auto& bq = DomainQuadrature::kBarycentric[q % 3];
    const cplx source =
        -k2 * contrast * amplitude * std::exp(cplx(0.0, k_ * direction.dot(quad.point(q)))) * quad.weight(q);
    for (int i = 0; i < 3; ++i) {
      const int d = dof_of_vertex_[tri[i]];
      if (d >= 0) rhs[d] += source * bq[i];
    }
  }

  CVector scattered = factorization_->lu.solve(rhs);
  if (!scattered.allFinite()) throw NumericalFailure("helmholtz: non-finite solution");

  CVector total(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const int d = dof_of_vertex_[v];
    const cplx inc = amplitude * std::exp(cplx(0.0, k_ * direction.dot(verts[v])));
    total[static_cast<Eigen::Index>(v)] = inc + (d >= 0 ? scattered[d] : cplx(0.0, 0.0));
  }
  return ComplexField(direction, k_, std::move(total));
}

std::vector<ComplexField> HelmholtzSolver::solve(std::span<const Vec2> directions) const {
  std::vector<ComplexField> fields(directions.size());
  const auto count = static_cast<std::ptrdiff_t>(directions.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) fields[i] = solve(directions[i]);
  return fields;
}

ComplexField solve_total_field(const TriangleMesh& mesh, const IndexField& n, double k, const Vec2& direction,
                               const SolverOptions& options) {
  if (n.zoning().num_triangles() != mesh.num_triangles()) {
    throw InvalidArgument("solve_total_field: zoning does not belong to this mesh");
  }
  const auto values = n.element_values();
  return HelmholtzSolver(mesh, values, k, options).solve(direction);
}

CVector far_field(const TriangleMesh& mesh, std::span<const cplx> element_index, double k, const ComplexField& u,
                  const DirectionGrid& measurement) {
  if (element_index.size() != mesh.num_triangles() || u.values().size() != static_cast<Eigen::Index>(mesh.num_vertices())) {
    throw InvalidArgument("far_field: index or field does not match the mesh");
  }
  const DomainQuadrature quad(mesh);
  const CVector uq = quad.evaluate(mesh, u);
  CVector out = CVector::Zero(static_cast<Eigen::Index>(measurement.size()));
  for (std::size_t m = 0; m < measurement.size(); ++m) {
    const Vec2 xhat = measurement.direction(m);
    cplx sum = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const cplx contrast = element_index[quad.element(q)] - 1.0;
      if (contrast == cplx(0.0, 0.0)) continue;
      sum += quad.weight(q) * contrast * std::exp(cplx(0.0, -k * xhat.dot(quad.point(q)))) *
             uq[static_cast<Eigen::Index>(q)];
    }
    out[static_cast<Eigen::Index>(m)] = k * k * sum;
  }
  return out;
}

CVector interpolate(const TriangleMesh& mesh, const ComplexField& u, const ProbePoints& probes) {
  constexpr double kInsideTol = 1e-10;
  CVector out(static_cast<Eigen::Index>(probes.size()));
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const int t = probes.elements[p];
    const auto bary = barycentric(mesh, t, probes.points[p]);
    for (double b : bary) {
      if (b < -kInsideTol) {
        throw InvalidArgument("interpolate: probe " + std::to_string(p) + " outside triangle " + std::to_string(t));
      }
    }
    const auto& tri = mesh.triangles()[t];
    out[static_cast<Eigen::Index>(p)] =
        bary[0] * u.values()[tri[0]] + bary[1] * u.values()[tri[1]] + bary[2] * u.values()[tri[2]];
  }
  return out;
}

}  // namespace iscat
