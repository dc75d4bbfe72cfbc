#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace iscat::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"problem", {"wave_number"}},
    {"scenario", {"name", "radius", "background", "reference"}},
    {"data",
     {"incidence", "incidence_start_deg", "incidence_aperture_deg", "measurement", "measurement_start_deg",
      "measurement_aperture_deg", "noise", "noise_seed", "mesh_epw", "mesh_seed"}},
    {"reconstruction",
     {"mesh_epw", "mesh_seed", "zones", "partition_seed", "strategy", "c1", "c2", "stop_tol", "max_iters",
      "real_constraint", "threshold", "n_max"}},
    {"localization", {"delta", "variant"}},
    {"output", {"directory"}},
    {"sweep", {"strategies", "zones", "thresholds", "n_max", "noise", "data_sizes", "workers"}},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (in.fail() || !(in >> std::ws).eof()) throw ConfigError(key + ": cannot parse '" + text + "'");
  return value;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) values.push_back(parse_value<T>(key, trim(item)));
  if (values.empty()) throw ConfigError(key + ": empty list");
  return values;
}

// "re" or "re im".
cplx parse_complex(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  double re = 0.0;
  double im = 0.0;
  in >> re;
  if (in.fail()) throw ConfigError(key + ": cannot parse '" + text + "'");
  if (!(in >> std::ws).eof()) {
    in >> im;
    if (in.fail() || !(in >> std::ws).eof()) throw ConfigError(key + ": cannot parse '" + text + "'");
  }
  return {re, im};
}

// "x y radius re im [perturbation]".
IndexDisc parse_disc(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  IndexDisc disc;
  double re = 0.0;
  double im = 0.0;
  in >> disc.center.x() >> disc.center.y() >> disc.radius >> re >> im;
  if (in.fail()) throw ConfigError(key + ": expected 'x y radius re im [perturbation]'");
  disc.value = {re, im};
  std::string flag;
  if (in >> flag) {
    if (flag != "perturbation") throw ConfigError(key + ": unknown flag '" + flag + "'");
    disc.perturbation = true;
  }
  if (!(in >> std::ws).eof()) throw ConfigError(key + ": trailing text");
  return disc;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  template <class T>
  void get(const std::string& path, T& target) const {
    if (auto v = tree_.get_optional<std::string>(path)) target = parse_value<T>(path, trim(*v));
  }
  std::optional<std::string> text(const std::string& path) const {
    if (auto v = tree_.get_optional<std::string>(path)) return trim(*v);
    return std::nullopt;
  }

 private:
  const pt::ptree& tree_;
};

}  // namespace

DirectionGrid Experiment::incidence() const {
  return DirectionGrid(incidence_count, incidence_start_deg * kPi / 180.0, incidence_aperture_deg * kPi / 180.0);
}

DirectionGrid Experiment::measurement() const {
  return DirectionGrid(measurement_count, measurement_start_deg * kPi / 180.0,
                       measurement_aperture_deg * kPi / 180.0);
}

Experiment parse_experiment(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto known = kKnownKeys.find(section);
    if (known == kKnownKeys.end() || body.data().size() > 0) {
      throw ConfigError("config: unknown section or top-level key '" + section + "'");
    }
    for (const auto& [key, value] : body) {
      const bool disc_key = section == "scenario" && key.rfind("disc", 0) == 0;
      if (!disc_key && !known->second.count(key)) throw ConfigError("config: unknown key " + section + "." + key);
    }
  }

  Experiment ex;
  const Reader r(tree);
  r.get("problem.wave_number", ex.wave_number);

  const std::string name = r.text("scenario.name").value_or("disc-in-disc");
  if (name == "custom") {
    ex.scenario.name = "custom";
  } else {
    try {
      ex.scenario = builtin_scenario(name);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("scenario.name: ") + e.what());
    }
  }
  r.get("scenario.radius", ex.scenario.radius);
  if (auto v = r.text("scenario.background")) ex.scenario.background = parse_complex("scenario.background", *v);
  if (auto v = r.text("scenario.reference")) {
    if (*v != "background" && *v != "known") throw ConfigError("scenario.reference: expected background or known");
    ex.scenario.reference_is_background = *v == "background";
  }
  if (const auto section = tree.get_child_optional("scenario")) {
    std::vector<std::pair<std::string, IndexDisc>> discs;
    for (const auto& [key, value] : *section) {
      if (key.rfind("disc", 0) == 0) discs.emplace_back(key, parse_disc("scenario." + key, trim(value.data())));
    }
    if (!discs.empty()) {
      // Replaces the built-in discs; later keys (by name) override earlier ones.
      std::sort(discs.begin(), discs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      ex.scenario.discs.clear();
      for (auto& [key, disc] : discs) ex.scenario.discs.push_back(disc);
    }
  }
  if (ex.scenario.name == "custom" && !r.text("scenario.background")) {
    throw ConfigError("scenario.background is required for a custom scenario");
  }

  r.get("data.incidence", ex.incidence_count);
  r.get("data.incidence_start_deg", ex.incidence_start_deg);
  r.get("data.incidence_aperture_deg", ex.incidence_aperture_deg);
  r.get("data.measurement", ex.measurement_count);
  r.get("data.measurement_start_deg", ex.measurement_start_deg);
  r.get("data.measurement_aperture_deg", ex.measurement_aperture_deg);
  r.get("data.noise", ex.noise);
  r.get("data.noise_seed", ex.noise_seed);

  ex.data_mesh.elements_per_wavelength = 40.0;
  ex.data_mesh.seed = 2;
  ex.reconstruction_mesh.elements_per_wavelength = 20.0;
  ex.reconstruction_mesh.seed = 1;
  r.get("data.mesh_epw", ex.data_mesh.elements_per_wavelength);
  r.get("data.mesh_seed", ex.data_mesh.seed);
  r.get("reconstruction.mesh_epw", ex.reconstruction_mesh.elements_per_wavelength);
  r.get("reconstruction.mesh_seed", ex.reconstruction_mesh.seed);
  for (MeshParams* m : {&ex.data_mesh, &ex.reconstruction_mesh}) {
    m->radius = ex.scenario.radius;
    m->wave_number = ex.wave_number;
  }

  r.get("reconstruction.zones", ex.zones);
  r.get("reconstruction.partition_seed", ex.partition_seed);
  if (auto v = r.text("reconstruction.strategy")) ex.strategy = *v;

  auto& sc = ex.strategy_config;
  r.get("reconstruction.c1", sc.gn.c1);
  r.get("reconstruction.c2", sc.gn.c2);
  r.get("reconstruction.stop_tol", sc.gn.stop_tol);
  r.get("reconstruction.max_iters", sc.gn.max_iters);
  r.get("reconstruction.threshold", sc.threshold);
  r.get("reconstruction.n_max", sc.n_max);
  const std::string constraint = r.text("reconstruction.real_constraint").value_or("auto");
  sc.gn.real_constraint =
      constraint == "auto" ? ex.scenario.is_real() : parse_bool("reconstruction.real_constraint", constraint);

  r.get("localization.delta", sc.localization.delta);
  sc.localization.epsilon = ex.noise;
  sc.localization.indices_real = ex.scenario.is_real();
  if (auto v = r.text("localization.variant")) {
    try {
      sc.localization.variant = parse_variant(*v);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("localization.variant: ") + e.what());
    }
  }

  if (auto v = r.text("output.directory")) ex.output_dir = *v;

  auto& sw = ex.sweep;
  sw.strategies = {ex.strategy};
  sw.zones = {ex.zones};
  sw.thresholds = {sc.threshold};
  sw.n_max = {sc.n_max};
  sw.noise = {ex.noise};
  sw.data_sizes = {ex.incidence_count};
  if (auto v = r.text("sweep.strategies")) sw.strategies = parse_list<std::string>("sweep.strategies", *v);
  if (auto v = r.text("sweep.zones")) sw.zones = parse_list<std::size_t>("sweep.zones", *v);
  if (auto v = r.text("sweep.thresholds")) sw.thresholds = parse_list<double>("sweep.thresholds", *v);
  if (auto v = r.text("sweep.n_max")) sw.n_max = parse_list<std::size_t>("sweep.n_max", *v);
  if (auto v = r.text("sweep.noise")) sw.noise = parse_list<double>("sweep.noise", *v);
  if (auto v = r.text("sweep.data_sizes")) sw.data_sizes = parse_list<std::size_t>("sweep.data_sizes", *v);
  r.get("sweep.workers", sw.workers);

  static const std::set<std::string> kStrategies = {"full", "selective", "adaptive", "combined"};
  for (const auto& s : sw.strategies) {
    if (!kStrategies.count(s)) throw ConfigError("unknown strategy '" + s + "'");
  }
  if (!kStrategies.count(ex.strategy)) throw ConfigError("unknown strategy '" + ex.strategy + "'");
  if (ex.wave_number <= 0.0) throw ConfigError("problem.wave_number must be positive");
  if (ex.incidence_count == 0 || ex.measurement_count == 0) throw ConfigError("direction counts must be positive");
  if (!(ex.noise >= 0.0)) throw ConfigError("data.noise must be non-negative");
  if (sw.workers == 0) throw ConfigError("sweep.workers must be positive");
  for (double e : sw.noise) {
    if (!(e >= 0.0)) throw ConfigError("sweep.noise entries must be non-negative");
  }
  for (std::size_t m : sw.data_sizes) {
    if (m == 0) throw ConfigError("sweep.data_sizes entries must be positive");
  }
  try {
    sc.validate();
    for (double t : sw.thresholds) {
      StrategyConfig probe = sc;
      probe.threshold = t;
      probe.validate();
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return ex;
}

Experiment load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_experiment(in);
}

}  // namespace iscat::cli
