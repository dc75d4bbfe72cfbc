#pragma once

#include <string>

#include "config.hpp"

namespace iscat::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kNumericalFailure = 3,
  kEmptySelection = 4,
  kBudgetExhausted = 5,
};

// Writes data_mesh.mesh, truth.farfield and data.farfield.
int run_synth(const Experiment& ex);
// Reads data.farfield; writes <strategy>_trace.csv, <strategy>_index.csv and,
// depending on the strategy, <strategy>_selection.txt and zones/<strategy>_<i>.zones.
// Returns kBudgetExhausted when the final Gauss-Newton run did not converge.
int run_reconstruct(const Experiment& ex, const std::string& strategy);
// Localization against the initial guess; writes localization.csv.
int run_localize(const Experiment& ex);
// One row per grid cell in sweep.csv; failed cells are flagged, not fatal.
int run_sweep(const Experiment& ex);

}  // namespace iscat::cli
