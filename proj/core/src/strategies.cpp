#include "iscat/strategies.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>

#include "iscat/mesh_io.hpp"

namespace iscat {

void StrategyConfig::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidArgument("strategy: threshold must lie in (0, 1]");
  if (n_max < 4) throw InvalidArgument("strategy: n_max must be at least 4");
  gn.validate();
}

RVector zone_scores(const LocalizationMap& map, const Zoning& zoning) {
  RVector scores = RVector::Zero(static_cast<Eigen::Index>(zoning.size()));
  for (std::size_t p = 0; p < map.elements.size(); ++p) {
    const int z = zoning.zone_of(map.elements[p]);
    if (z >= 0) scores[z] = std::max(scores[z], map.normalized[static_cast<Eigen::Index>(p)]);
  }
  return scores;
}

std::vector<int> select_zones(const LocalizationMap& map, const Zoning& zoning, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidArgument("select_zones: threshold must lie in (0, 1]");
  const RVector scores = zone_scores(map, zoning);
  std::vector<int> out;
  if (scores.size() == 0) throw EmptySelection("select_zones: zoning is empty");
  const double top = scores.maxCoeff();
  if (!(top > 0.0)) throw EmptySelection("select_zones: no probe falls in any zone");
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    if (scores[i] > threshold * top || scores[i] == top) out.push_back(static_cast<int>(i));
  }
  return out;
}

namespace {

std::vector<int> all_zones(const Zoning& zoning) {
  std::vector<int> out(zoning.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(i);
  return out;
}

void append_trace(GNTrace& into, const GNTrace& from) {
  const int offset = into.records.empty() ? 0 : into.records.back().iter;
  for (auto rec : from.records) {
    rec.iter += offset;
    into.records.push_back(std::move(rec));
  }
  into.converged = from.converged;
}

LocalizationMap localize_against(const TriangleMesh& mesh, const ForwardState& state, const FarFieldData& data,
                                 const StrategyConfig& cfg, bool indices_real) {
  LocalizationConfig lc = cfg.localization;
  lc.indices_real = lc.indices_real && indices_real;
  return localize(state, data, probe_points(mesh), lc);
}

bool index_is_real(const IndexField& n, const StrategyConfig& cfg) { return n.is_real() && cfg.gn.real_constraint; }

}  // namespace

StrategyResult full_reconstruction(const TriangleMesh& mesh, const IndexField& n0, const FarFieldData& data,
                                   const StrategyConfig& cfg, const std::vector<cplx>& truth) {
  cfg.validate();
  GNOptions opt;
  opt.truth = truth;
  GNResult gn = gauss_newton(mesh, n0, data, cfg.gn, opt);
  StrategyResult out;
  out.field = std::move(gn.field);
  out.trace = std::move(gn.trace);
  out.converged = out.trace.converged;
  out.active_zones = all_zones(n0.zoning());
  out.history.push_back(n0.zoning());
  return out;
}

StrategyResult selective_reconstruction(const TriangleMesh& mesh, const IndexField& n0, const FarFieldData& data,
                                        const StrategyConfig& cfg, const std::vector<cplx>& truth) {
  cfg.validate();
  const ForwardState state(mesh, n0.element_values(), data.wave_number, data.incidence, data.measurement,
                           cfg.gn.solver);
  const LocalizationMap map = localize_against(mesh, state, data, cfg, index_is_real(n0, cfg));
  StrategyResult out;
  out.active_zones = select_zones(map, n0.zoning(), cfg.threshold);
  for (int z : out.active_zones) {
    const auto& zone = n0.zoning().zone(z);
    out.selected_elements.insert(out.selected_elements.end(), zone.begin(), zone.end());
  }
  std::sort(out.selected_elements.begin(), out.selected_elements.end());

  GNOptions opt;
  opt.truth = truth;
  opt.active_zones = out.active_zones;
  GNResult gn = gauss_newton(mesh, n0, data, cfg.gn, opt);
  out.field = std::move(gn.field);
  out.trace = std::move(gn.trace);
  out.converged = out.trace.converged;
  out.history.push_back(n0.zoning());
  return out;
}

namespace {

// `anchor` holds per-triangle values of the Tikhonov anchor; each refined
// zoning is anchored at its zone means.
StrategyResult refine(const TriangleMesh& mesh, const IndexField& n0, const std::vector<cplx>& anchor,
                      const FarFieldData& data, const StrategyConfig& cfg, const std::vector<cplx>& truth,
                      std::vector<int> active) {
  cfg.validate();
  if (active.empty()) active = all_zones(n0.zoning());
  for (int z : active) {
    if (z < 0 || static_cast<std::size_t>(z) >= n0.size()) throw InvalidArgument("adaptive: active zone out of range");
  }
  if (active.size() > cfg.n_max) throw InvalidArgument("adaptive: more active zones than the budget allows");

  StrategyResult out;
  out.field = n0;
  out.history.push_back(n0.zoning());
  auto state = std::make_shared<const ForwardState>(mesh, n0.element_values(), data.wave_number, data.incidence,
                                                    data.measurement, cfg.gn.solver);
  GNOptions opt;
  opt.truth = truth;
  // Zones whose shape admits no split into four connected parts.
  std::set<int> unsplittable;

  while (true) {
    const Zoning& zoning = out.field.zoning();
    std::vector<int> candidates;
    for (int z : active) {
      if (zoning.zone(z).size() > kMinSplitSize && !unsplittable.count(z)) candidates.push_back(z);
    }
    if (candidates.empty() || active.size() + 3 > cfg.n_max) break;

    const LocalizationMap map = localize_against(mesh, *state, data, cfg, index_is_real(out.field, cfg));
    const RVector scores = zone_scores(map, zoning);
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
    });
    int target = -1;
    std::optional<Zoning> split;
    for (int z : candidates) {
      try {
        split = split_zone(mesh, zoning, static_cast<std::size_t>(z));
        target = z;
        break;
      } catch (const NumericalFailure&) {
        unsplittable.insert(z);
      }
    }
    if (!split) break;

    Zoning refined = std::move(*split);
    std::vector<cplx> params = out.field.parameters();
    params.resize(refined.size(), params[target]);
    for (std::size_t z = zoning.size(); z < refined.size(); ++z) active.push_back(static_cast<int>(z));
    IndexField anchored = IndexField::from_elements(mesh, refined, anchor);
    out.history.push_back(std::move(refined));
    out.split_targets.push_back(target);
    ++out.splits;

    opt.active_zones = active;
    opt.start = std::move(params);
    GNResult gn = gauss_newton(mesh, anchored, data, cfg.gn, opt);
    append_trace(out.trace, gn.trace);
    out.field = std::move(gn.field);
    state = std::move(gn.state);
  }
  out.active_zones = active;
  out.converged = out.splits == 0 ? true : out.trace.converged;
  return out;
}

}  // namespace

StrategyResult adaptive_refinement(const TriangleMesh& mesh, const IndexField& n0, const FarFieldData& data,
                                   const StrategyConfig& cfg, const std::vector<cplx>& truth,
                                   std::vector<int> active) {
  return refine(mesh, n0, n0.element_values(), data, cfg, truth, std::move(active));
}

StrategyResult combined(const TriangleMesh& mesh, const IndexField& n0, const FarFieldData& data,
                        const StrategyConfig& cfg, const std::vector<cplx>& truth) {
  cfg.validate();
  const ForwardState state(mesh, n0.element_values(), data.wave_number, data.incidence, data.measurement,
                           cfg.gn.solver);
  const LocalizationMap map = localize_against(mesh, state, data, cfg, index_is_real(n0, cfg));
  const std::vector<int> selected = select_zones(map, n0.zoning(), cfg.threshold);

  // Root zone: all selected elements. Unselected zones are kept as frozen zones.
  std::vector<char> is_selected(n0.size(), 0);
  for (int z : selected) is_selected[z] = 1;
  std::vector<std::vector<int>> zones(1);
  std::vector<cplx> params(1);
  double area = 0.0;
  cplx mass = 0.0;
  for (std::size_t z = 0; z < n0.size(); ++z) {
    const auto& zone = n0.zoning().zone(z);
    if (is_selected[z]) {
      zones[0].insert(zones[0].end(), zone.begin(), zone.end());
      for (int t : zone) {
        area += mesh.area(t);
        mass += mesh.area(t) * n0.parameters()[z];
      }
    } else {
      zones.push_back(zone);
      params.push_back(n0.parameters()[z]);
    }
  }
  params[0] = mass / area;
  std::vector<int> selected_elements = zones[0];
  std::sort(selected_elements.begin(), selected_elements.end());

  const IndexField root(Zoning(mesh.num_triangles(), std::move(zones)), std::move(params));
  StrategyResult out = refine(mesh, root, n0.element_values(), data, cfg, truth, {0});
  out.selected_elements = std::move(selected_elements);
  return out;
}

void save_selection(const std::string& path, const std::vector<int>& elements) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path);
  for (int t : elements) out << t << '\n';
}

void save_zoning_history(const std::string& prefix, const std::vector<Zoning>& history) {
  for (std::size_t i = 0; i < history.size(); ++i) save_zoning(prefix + std::to_string(i) + ".zones", history[i]);
}

}  // namespace iscat
