#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "iscat/mesh_io.hpp"

namespace iscat::cli {

namespace fs = std::filesystem;

namespace {

fs::path output_path(const Experiment& ex, const std::string& name) {
  fs::create_directories(ex.output_dir);
  return fs::path(ex.output_dir) / name;
}

Zoning initial_zoning(const TriangleMesh& mesh, const std::string& strategy, std::size_t zones,
                      std::uint64_t seed) {
  if (strategy == "adaptive") return single_zone(mesh);
  if (zones == 0) return per_element_zoning(mesh);
  return partition_zones(mesh, zones, seed);
}

struct Outcome {
  StrategyResult result;
  std::vector<cplx> truth;
};

Outcome run_strategy(const Experiment& ex, const TriangleMesh& mesh, const FarFieldData& data,
                     const std::string& strategy, std::size_t zones, const StrategyConfig& cfg) {
  Outcome out;
  out.truth = ex.scenario.sample(mesh);
  const auto reference = ex.scenario.sample_reference(mesh);
  const auto n0 =
      IndexField::from_elements(mesh, initial_zoning(mesh, strategy, zones, ex.partition_seed), reference);
  if (strategy == "full") {
    out.result = full_reconstruction(mesh, n0, data, cfg, out.truth);
  } else if (strategy == "selective") {
    out.result = selective_reconstruction(mesh, n0, data, cfg, out.truth);
  } else if (strategy == "adaptive") {
    out.result = adaptive_refinement(mesh, n0, data, cfg, out.truth);
  } else {
    out.result = combined(mesh, n0, data, cfg, out.truth);
  }
  return out;
}

std::size_t final_parameter_count(const std::string& strategy, const StrategyResult& r) {
  if (strategy == "selective") return r.selected_elements.size();
  return r.active_zones.size();
}

}  // namespace

int run_synth(const Experiment& ex) {
  const TriangleMesh mesh = build_disc_mesh(ex.data_mesh);
  const FarFieldData truth = make_truth(ex.scenario, mesh, ex.wave_number, ex.incidence(), ex.measurement());
  const FarFieldData data = add_noise(truth, ex.noise, ex.noise_seed);
  save_mesh(output_path(ex, "data_mesh.mesh").string(), mesh);
  save_far_field(output_path(ex, "truth.farfield").string(), truth);
  save_far_field(output_path(ex, "data.farfield").string(), data);
  std::cout << "synth: scenario " << ex.scenario.name << ", " << mesh.inhomogeneity_elements().size()
            << " data elements in D, " << ex.incidence_count << "x" << ex.measurement_count << " directions, noise "
            << ex.noise << " -> " << ex.output_dir << "\n";
  return kSuccess;
}

int run_reconstruct(const Experiment& ex, const std::string& strategy) {
  const FarFieldData data = load_far_field((fs::path(ex.output_dir) / "data.farfield").string());
  const TriangleMesh mesh = build_disc_mesh(ex.reconstruction_mesh);
  const auto [result, truth] = run_strategy(ex, mesh, data, strategy, ex.zones, ex.strategy_config);

  save_trace_csv(output_path(ex, strategy + "_trace.csv").string(), result.trace);
  save_index_field(output_path(ex, strategy + "_index.csv").string(), mesh, result.field);
  if (strategy == "selective" || strategy == "combined") {
    save_selection(output_path(ex, strategy + "_selection.txt").string(), result.selected_elements);
  }
  if (strategy == "adaptive" || strategy == "combined") {
    fs::create_directories(fs::path(ex.output_dir) / "zones");
    save_zoning_history((fs::path(ex.output_dir) / "zones" / (strategy + "_")).string(), result.history);
  }
  const double error = relative_error(mesh, result.field.element_values(), truth);
  std::cout << "reconstruct " << strategy << ": error " << error << ", parameters "
            << final_parameter_count(strategy, result) << ", iterations " << result.trace.records.size()
            << (result.converged ? "" : ", not converged") << "\n";
  return result.converged ? kSuccess : kBudgetExhausted;
}

int run_localize(const Experiment& ex) {
  const FarFieldData data = load_far_field((fs::path(ex.output_dir) / "data.farfield").string());
  const TriangleMesh mesh = build_disc_mesh(ex.reconstruction_mesh);
  const ForwardState state(mesh, ex.scenario.sample_reference(mesh), data.wave_number, data.incidence,
                           data.measurement, ex.strategy_config.gn.solver);
  const LocalizationMap map = localize(state, data, probe_points(mesh), ex.strategy_config.localization);
  save_localization_csv(output_path(ex, "localization.csv").string(), map);
  std::cout << "localize: " << to_string(map.variant) << ", " << map.terms << " terms, sigma_1 "
            << map.sigma(0) << "\n";
  return kSuccess;
}

int run_sweep(const Experiment& ex) {
  struct Cell {
    std::string strategy;
    std::size_t zones = 0;
    double threshold = 0.0;
    std::size_t n_max = 0;
    double noise = 0.0;
    std::size_t data_size = 0;
  };
  const auto& sw = ex.sweep;
  std::vector<Cell> cells;
  for (const auto& strategy : sw.strategies) {
    for (double noise : sw.noise) {
      for (std::size_t m : sw.data_sizes) {
        Cell c{strategy, ex.zones, ex.strategy_config.threshold, ex.strategy_config.n_max, noise, m};
        if (strategy == "full") {
          for (std::size_t z : sw.zones) {
            c.zones = z;
            cells.push_back(c);
          }
        } else if (strategy == "adaptive") {
          for (std::size_t n : sw.n_max) {
            c.n_max = n;
            cells.push_back(c);
          }
        } else {
          for (double t : sw.thresholds) {
            c.threshold = t;
            cells.push_back(c);
          }
        }
      }
    }
  }

  const TriangleMesh data_mesh = build_disc_mesh(ex.data_mesh);
  const TriangleMesh mesh = build_disc_mesh(ex.reconstruction_mesh);
  // Noise-free data per data size, shared by the cells.
  std::map<std::size_t, FarFieldData> truths;
  for (std::size_t m : sw.data_sizes) {
    if (truths.count(m)) continue;
    const DirectionGrid inc(m, ex.incidence_start_deg * kPi / 180.0, ex.incidence_aperture_deg * kPi / 180.0);
    const DirectionGrid meas(m, ex.measurement_start_deg * kPi / 180.0, ex.measurement_aperture_deg * kPi / 180.0);
    truths.emplace(m, make_truth(ex.scenario, data_mesh, ex.wave_number, inc, meas));
  }

  std::vector<std::string> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      std::ostringstream row;
      row << c.strategy << ',' << c.zones << ',' << c.threshold << ',' << c.n_max << ',' << c.noise << ','
          << c.data_size << ',';
      const auto t0 = std::chrono::steady_clock::now();
      try {
        StrategyConfig cfg = ex.strategy_config;
        cfg.threshold = c.threshold;
        cfg.n_max = c.n_max;
        cfg.localization.epsilon = c.noise;
        const FarFieldData data = add_noise(truths.at(c.data_size), c.noise, ex.noise_seed);
        const auto [result, truth] = run_strategy(ex, mesh, data, c.strategy, c.zones, cfg);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row << final_parameter_count(c.strategy, result) << ','
            << std::setprecision(6) << relative_error(mesh, result.field.element_values(), truth) << ','
            << result.trace.records.size() << ',' << seconds << ',' << (result.converged ? "ok" : "not-converged");
      } catch (const std::exception& e) {
        std::string what = e.what();
        std::replace(what.begin(), what.end(), ',', ';');
        row << ",,,," << "failed: " << what;
      }
      rows[i] = row.str();
    }
  };
  const std::size_t n_workers = std::min(sw.workers, std::max<std::size_t>(cells.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const auto path = output_path(ex, "sweep.csv");
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path.string());
  out << "strategy,zones,threshold,n_max,epsilon,data_size,parameters,error,iterations,seconds,status\n";
  for (const auto& r : rows) out << r << '\n';
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.find(",failed: ") != std::string::npos;
  std::cout << "sweep: " << cells.size() << " cells, " << failed << " failed -> " << path.string() << "\n";
  return kSuccess;
}

}  // namespace iscat::cli
