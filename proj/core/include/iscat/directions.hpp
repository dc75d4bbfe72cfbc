#pragma once

#include <cmath>
#include <vector>

#include "iscat/types.hpp"

namespace iscat {

// Equispaced directions on the unit circle over [start, start + aperture),
// each carrying the quadrature weight aperture / M.
class DirectionGrid {
 public:
  DirectionGrid() = default;
  DirectionGrid(std::size_t count, double start, double aperture);

  static DirectionGrid full(std::size_t count) { return DirectionGrid(count, 0.0, 2.0 * kPi); }
  // Explicit angles and weights, e.g. as read back from a file.
  static DirectionGrid from_samples(std::vector<double> angles, std::vector<double> weights);

  std::size_t size() const { return angles_.size(); }
  double angle(std::size_t j) const { return angles_[j]; }
  double weight(std::size_t j) const { return weights_[j]; }
  Vec2 direction(std::size_t j) const { return {std::cos(angles_[j]), std::sin(angles_[j])}; }
  const std::vector<double>& angles() const { return angles_; }
  const std::vector<double>& weights() const { return weights_; }
  double start() const { return start_; }
  double aperture() const { return aperture_; }
  bool is_full() const;

  bool operator==(const DirectionGrid& other) const { return angles_ == other.angles_ && weights_ == other.weights_; }

 private:
  std::vector<double> angles_;
  std::vector<double> weights_;
  double start_ = 0.0;
  double aperture_ = 0.0;
};

}  // namespace iscat
