#pragma once

#include <string>
#include <vector>

#include "iscat/localization.hpp"
#include "iscat/reconstruction.hpp"

namespace iscat {

struct StrategyConfig {
  double threshold = 0.1;  // T in (0, 1]
  std::size_t n_max = 76;  // refinement budget on the number of reconstructed zones
  GNConfig gn;
  LocalizationConfig localization;

  void validate() const;
};

// Per-zone maximum of the normalized indicator (0 for zones without probes).
RVector zone_scores(const LocalizationMap& map, const Zoning& zoning);

// Zones with score > T * max, plus the zones attaining the maximum, in
// increasing index order. Throws EmptySelection if nothing qualifies.
std::vector<int> select_zones(const LocalizationMap& map, const Zoning& zoning, double threshold);

struct StrategyResult {
  IndexField field;
  GNTrace trace;  // concatenated over inner Gauss-Newton runs, iterations renumbered
  std::vector<Zoning> history;
  std::vector<int> active_zones;
  std::vector<int> selected_elements;  // selective and combined only
  std::size_t splits = 0;
  std::vector<int> split_targets;  // zone split at each refinement, indexed in the previous zoning
  bool converged = false;  // the last Gauss-Newton run met its stopping test
};

// Plain Gauss-Newton on every zone of n0.
StrategyResult full_reconstruction(const TriangleMesh& mesh, const IndexField& n0, const FarFieldData& data,
                                   const StrategyConfig& cfg, const std::vector<cplx>& truth = {});

// Localize against n0, then reconstruct only the selected zones.
StrategyResult selective_reconstruction(const TriangleMesh& mesh, const IndexField& n0, const FarFieldData& data,
                                        const StrategyConfig& cfg, const std::vector<cplx>& truth = {});

// Split the active zone with the largest indicator into four and
// re-run Gauss-Newton from the current iterate, until the budget or the
// 16-element floor stops it. Zones that cannot be split are passed over. `active` empty means every zone of n0.
StrategyResult adaptive_refinement(const TriangleMesh& mesh, const IndexField& n0, const FarFieldData& data,
                                   const StrategyConfig& cfg, const std::vector<cplx>& truth = {},
                                   std::vector<int> active = {});

// Selection against n0, then adaptive refinement from a single root zone
// made of the selected elements. Other zones stay frozen at n0.
StrategyResult combined(const TriangleMesh& mesh, const IndexField& n0, const FarFieldData& data,
                        const StrategyConfig& cfg, const std::vector<cplx>& truth = {});

void save_selection(const std::string& path, const std::vector<int>& elements);
// Writes <prefix><i>.zones for every entry of the history.
void save_zoning_history(const std::string& prefix, const std::vector<Zoning>& history);

}  // namespace iscat
