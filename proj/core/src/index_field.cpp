#include "iscat/index_field.hpp"

#include <cmath>

namespace iscat {

IndexField::IndexField(Zoning zoning, std::vector<cplx> parameters)
    : zoning_(std::move(zoning)), parameters_(std::move(parameters)) {
  if (parameters_.size() != zoning_.size()) {
    throw InvalidArgument("index field: " + std::to_string(parameters_.size()) + " parameters for " +
                          std::to_string(zoning_.size()) + " zones");
  }
}

IndexField IndexField::constant(Zoning zoning, cplx value) {
  const std::size_t n = zoning.size();
  return IndexField(std::move(zoning), std::vector<cplx>(n, value));
}

IndexField IndexField::from_elements(const TriangleMesh& mesh, Zoning zoning, std::span<const cplx> element_values) {
  if (element_values.size() != mesh.num_triangles()) {
    throw InvalidArgument("index field: one value per triangle required");
  }
  std::vector<cplx> params(zoning.size());
  for (std::size_t z = 0; z < zoning.size(); ++z) {
    cplx sum = 0.0;
    double area = 0.0;
    for (int t : zoning.zone(z)) {
      const double a = mesh.area(t);
      sum += a * element_values[t];
      area += a;
    }
    params[z] = sum / area;
  }
  return IndexField(std::move(zoning), std::move(params));
}

std::vector<cplx> IndexField::element_values() const {
  std::vector<cplx> values(zoning_.num_triangles(), cplx(1.0, 0.0));
  for (std::size_t z = 0; z < zoning_.size(); ++z) {
    for (int t : zoning_.zone(z)) values[t] = parameters_[z];
  }
  return values;
}

bool IndexField::is_real() const {
  for (const auto& p : parameters_) {
    if (p.imag() != 0.0) return false;
  }
  return true;
}

double l2_norm_over_d(const TriangleMesh& mesh, std::span<const cplx> element_values) {
  double sum = 0.0;
  for (int t : mesh.inhomogeneity_elements()) sum += mesh.area(t) * std::norm(element_values[t]);
  return std::sqrt(sum);
}

}  // namespace iscat
