#pragma once

#include <span>
#include <vector>

#include "iscat/zoning.hpp"

namespace iscat {

// Piecewise-constant refraction index: parameter i on zone i, 1 on every
// triangle outside the zones.
class IndexField {
 public:
  IndexField() = default;
  IndexField(Zoning zoning, std::vector<cplx> parameters);

  static IndexField constant(Zoning zoning, cplx value);
  // Zone parameters as area-weighted means of per-triangle values.
  static IndexField from_elements(const TriangleMesh& mesh, Zoning zoning, std::span<const cplx> element_values);

  const Zoning& zoning() const { return zoning_; }
  const std::vector<cplx>& parameters() const { return parameters_; }
  std::vector<cplx>& parameters() { return parameters_; }
  std::size_t size() const { return parameters_.size(); }

  cplx element_value(int t) const {
    const int z = zoning_.zone_of(t);
    return z >= 0 ? parameters_[z] : cplx(1.0, 0.0);
  }
  // One value per mesh triangle.
  std::vector<cplx> element_values() const;

  bool is_real() const;

 private:
  Zoning zoning_;
  std::vector<cplx> parameters_;
};

// Area-weighted L2(D) norm of per-triangle values restricted to D.
double l2_norm_over_d(const TriangleMesh& mesh, std::span<const cplx> element_values);

}  // namespace iscat
