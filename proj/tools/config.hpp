#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "iscat/mesh.hpp"
#include "iscat/strategies.hpp"
#include "iscat/synthetic.hpp"

namespace iscat::cli {

// Bad or missing configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepGrid {
  std::vector<std::string> strategies;
  std::vector<std::size_t> zones;  // full strategy; 0 = one zone per element
  std::vector<double> thresholds;  // selective and combined
  std::vector<std::size_t> n_max;  // adaptive
  std::vector<double> noise;
  std::vector<std::size_t> data_sizes;  // M_e = M_m
  std::size_t workers = 1;
};

struct Experiment {
  Scenario scenario;
  double wave_number = 5.0;

  std::size_t incidence_count = 30;
  double incidence_start_deg = 0.0;
  double incidence_aperture_deg = 360.0;
  std::size_t measurement_count = 30;
  double measurement_start_deg = 0.0;
  double measurement_aperture_deg = 360.0;

  double noise = 0.02;
  std::uint64_t noise_seed = 7;

  MeshParams data_mesh;
  MeshParams reconstruction_mesh;
  std::size_t zones = 0;  // 0 = one zone per element
  std::uint64_t partition_seed = 3;

  std::string strategy = "full";
  StrategyConfig strategy_config;

  std::string output_dir = "out";
  SweepGrid sweep;

  DirectionGrid incidence() const;
  DirectionGrid measurement() const;
};

// INI-style file: "key = value" lines grouped under [section] headers.
// Unknown sections or keys are rejected.
Experiment load_experiment(const std::string& path);
Experiment parse_experiment(std::istream& in);

}  // namespace iscat::cli
