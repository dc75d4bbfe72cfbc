#include "iscat/directions.hpp"

#include <cmath>

namespace iscat {

DirectionGrid::DirectionGrid(std::size_t count, double start, double aperture) : start_(start), aperture_(aperture) {
  if (count == 0) throw InvalidArgument("direction grid: at least one direction required");
  if (!(aperture > 0.0) || aperture > 2.0 * kPi + 1e-12) {
    throw InvalidArgument("direction grid: aperture must lie in (0, 2*pi]");
  }
  angles_.reserve(count);
  for (std::size_t j = 0; j < count; ++j) angles_.push_back(start + aperture * static_cast<double>(j) / count);
  weights_.assign(count, aperture / static_cast<double>(count));
}

DirectionGrid DirectionGrid::from_samples(std::vector<double> angles, std::vector<double> weights) {
  if (angles.empty() || angles.size() != weights.size()) {
    throw InvalidArgument("direction grid: need matching, non-empty angle and weight lists");
  }
  DirectionGrid grid;
  grid.start_ = angles.front();
  for (double w : weights) {
    if (!(w > 0.0)) throw InvalidArgument("direction grid: weights must be positive");
    grid.aperture_ += w;
  }
  grid.angles_ = std::move(angles);
  grid.weights_ = std::move(weights);
  return grid;
}

bool DirectionGrid::is_full() const { return std::abs(aperture_ - 2.0 * kPi) < 1e-12; }

}  // namespace iscat
