#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "iscat/scattering.hpp"

using namespace iscat;
using namespace iscat::cli;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"(
[problem]
wave_number = 5

[scenario]
name = disc-in-disc

[data]
incidence = 8
measurement = 8
noise = 0.02
noise_seed = 7
mesh_epw = 12
mesh_seed = 2

[reconstruction]
mesh_epw = 10
mesh_seed = 1
zones = 20
n_max = 10
)";

Experiment parse(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment(in);
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("iscat_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(ISCAT_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto path = dir / "run.ini";
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("config defaults and overrides", "[cli][config]") {
  const auto ex = parse("");
  CHECK(ex.scenario.name == "disc-in-disc");
  CHECK(ex.wave_number == 5.0);
  CHECK(ex.incidence_count == 30);
  CHECK(ex.noise == 0.02);
  CHECK(ex.strategy == "full");
  CHECK(ex.strategy_config.gn.real_constraint);
  CHECK(ex.strategy_config.gn.c2 == 1e-2);
  CHECK(ex.strategy_config.gn.stop_tol == 1e-4);
  CHECK(ex.data_mesh.elements_per_wavelength == 40.0);
  CHECK(ex.reconstruction_mesh.elements_per_wavelength == 20.0);

  const auto cm = parse("[scenario]\nname = complex-multizone\n[data]\nmeasurement_aperture_deg = 270\n");
  CHECK_FALSE(cm.strategy_config.gn.real_constraint);
  CHECK_FALSE(cm.measurement().is_full());
  CHECK(cm.measurement().aperture() == Catch::Approx(1.5 * kPi));

  const auto custom = parse(
      "[scenario]\nname = custom\nbackground = 1.2 0.05\nreference = known\n"
      "disc1 = 0 0 0.5 1.4 0\ndisc2 = 0.1 0 0.2 1.6 0.2 perturbation\n");
  REQUIRE(custom.scenario.discs.size() == 2);
  CHECK(custom.scenario.background == cplx(1.2, 0.05));
  CHECK(custom.scenario.discs[1].perturbation);
  CHECK(custom.scenario.value_at({0.1, 0.0}) == cplx(1.6, 0.2));
  CHECK(custom.scenario.reference_at({0.1, 0.0}) == cplx(1.4, 0.0));

  const auto sweep = parse("[sweep]\nzones = 10, 27, 75\nnoise = 0.01,0.02,0.05\nworkers = 3\n");
  CHECK(sweep.sweep.zones == std::vector<std::size_t>{10, 27, 75});
  CHECK(sweep.sweep.noise.size() == 3);
  CHECK(sweep.sweep.workers == 3);
}

TEST_CASE("config errors", "[cli][config]") {
  CHECK_THROWS_AS(parse("[scenario]\nname = nope\n"), ConfigError);
  CHECK_THROWS_AS(parse("[data]\nnoize = 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[bogus]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[data]\nnoise = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse("[data]\nnoise = -0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[reconstruction]\nstrategy = greedy\n"), ConfigError);
  CHECK_THROWS_AS(parse("[reconstruction]\nthreshold = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[scenario]\nname = custom\n"), ConfigError);
  CHECK_THROWS_AS(parse("[scenario]\ndisc1 = 0 0 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("[localization]\nvariant = qr\n"), ConfigError);
  CHECK_THROWS_AS(load_experiment("/nonexistent/run.ini"), ConfigError);
}

TEST_CASE("synth is deterministic and calibrated", "[cli]") {
  const auto dir = scratch_dir("synth");
  auto ex = parse(kSmall);
  ex.output_dir = (dir / "a").string();
  REQUIRE(run_synth(ex) == kSuccess);
  ex.output_dir = (dir / "b").string();
  REQUIRE(run_synth(ex) == kSuccess);
  for (const char* f : {"data_mesh.mesh", "truth.farfield", "data.farfield"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  ex.noise = 0.0;
  ex.output_dir = (dir / "c").string();
  REQUIRE(run_synth(ex) == kSuccess);
  CHECK(slurp(dir / "a" / "truth.farfield") == slurp(dir / "c" / "truth.farfield"));
  CHECK(slurp(dir / "a" / "data.farfield") != slurp(dir / "c" / "data.farfield"));
  const auto truth = load_far_field((dir / "a" / "truth.farfield").string());
  const auto noisy = load_far_field((dir / "a" / "data.farfield").string());
  const double gap = weighted_norm(noisy.values - truth.values, truth.incidence, truth.measurement);
  CHECK(gap / weighted_norm(truth) == Catch::Approx(0.02).margin(1e-12));
  fs::remove_all(dir);
}

TEST_CASE("command-line exit codes and outputs", "[cli]") {
  const auto dir = scratch_dir("run");
  const auto cfg = write_config(dir, kSmall).string();
  const std::string out = " -o " + (dir / "out").string();

  CHECK(run_cli("") == kConfigError);
  CHECK(run_cli("synth " + (dir / "missing.ini").string()) == kConfigError);
  CHECK(run_cli("reconstruct " + cfg + out) == kConfigError);  // no data yet
  REQUIRE(run_cli("synth " + cfg + out) == kSuccess);

  CHECK(run_cli("reconstruct " + cfg + out + " -s full") == kSuccess);
  std::ifstream trace(dir / "out" / "full_trace.csv");
  std::string line;
  std::getline(trace, line);
  CHECK(line == "iter,fidelity,step,rel_error");
  int rows = 0;
  while (std::getline(trace, line)) {
    ++rows;
    CHECK(line.back() != ',');
  }
  CHECK(rows >= 1);
  CHECK(rows <= 8);

  CHECK(run_cli("reconstruct " + cfg + out + " -s combined") == kSuccess);
  CHECK(fs::exists(dir / "out" / "combined_selection.txt"));
  CHECK(fs::exists(dir / "out" / "zones" / "combined_0.zones"));
  CHECK(fs::exists(dir / "out" / "combined_index.csv"));

  CHECK(run_cli("localize " + cfg + out) == kSuccess);
  CHECK(fs::exists(dir / "out" / "localization.csv"));

  // A budget of one iteration cannot meet the stopping test.
  const auto tight = write_config(dir, std::string(kSmall) + "max_iters = 1\n").string();
  CHECK(run_cli("reconstruct " + tight + out + " -s full") == kBudgetExhausted);

  // Perturbation-free, noise-free data: nothing to localize.
  const auto null_dir = scratch_dir("null");
  const auto null_cfg = write_config(null_dir,
                                     "[scenario]\nname = homogeneous\n[data]\nincidence = 6\nmeasurement = 6\n"
                                     "noise = 0\nmesh_epw = 10\nmesh_seed = 1\n[reconstruction]\nmesh_epw = 10\n"
                                     "mesh_seed = 1\n")
                            .string();
  const std::string null_out = " -o " + (null_dir / "out").string();
  REQUIRE(run_cli("synth " + null_cfg + null_out) == kSuccess);
  CHECK(run_cli("localize " + null_cfg + null_out) == kNumericalFailure);
  fs::remove_all(dir);
  fs::remove_all(null_dir);
}

TEST_CASE("sweep tabulates every cell", "[cli]") {
  const auto dir = scratch_dir("sweep");
  auto ex = parse(std::string(kSmall) + "[sweep]\nzones = 10, 27, 75\nnoise = 0.01, 0.02, 0.05\nworkers = 2\n");
  ex.output_dir = dir.string();
  REQUIRE(run_sweep(ex) == kSuccess);
  std::ifstream in(dir / "sweep.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "strategy,zones,threshold,n_max,epsilon,data_size,parameters,error,iterations,seconds,status");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.rfind("full,", 0) == 0);
    CHECK(line.find("failed") == std::string::npos);
  }
  CHECK(rows == 9);

  // Bad cells are flagged and the sweep continues.
  auto bad = parse(std::string(kSmall) + "[sweep]\nzones = 5, 100000\n");
  bad.output_dir = dir.string();
  REQUIRE(run_sweep(bad) == kSuccess);
  const auto text = slurp(dir / "sweep.csv");
  CHECK(text.find("failed: ") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  fs::remove_all(dir);
}
