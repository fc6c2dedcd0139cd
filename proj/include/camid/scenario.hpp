// Identification scenarios: ground-truth rules, random initial lattices,
// forward trajectories, and noise-corrupted observations.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "camid/grid.hpp"
#include "camid/rule.hpp"

namespace camid {

enum class ThetaScheme { random_uniform, distance_based };

const char* to_string(ThetaScheme s);
ThetaScheme theta_scheme_from_string(const std::string& name);

// Ground-truth rule weights.
//   random_uniform: K i.i.d. uniforms in [0,1), normalized to sum 1.
//   distance_based: raw_j = 1/(1 + d(offset_j)) with the topology's own
//                   metric (d1 for Manhattan, d_inf for Moore), normalized.
//                   The +1 keeps the center cell finite and dominant.
RuleParams make_rule(const NeighborhoodSpec& spec, ThetaScheme scheme,
                     std::uint64_t seed);

struct NoiseStats {
  double sigma = 0.0;              // applied per-cell noise std
  double empirical_snr_db = 0.0;   // measured before clamping
  double clamped_fraction = 0.0;
};

// Adds i.i.d. Gaussian noise sized for the requested SNR over the whole
// trajectory (one global sigma from the mean squared signal), then clamps
// into [0,1]. Noise covers every configuration, including the initial one.
std::vector<Configuration> add_noise(const std::vector<Configuration>& traj,
                                     double snr_db, std::uint64_t seed,
                                     NoiseStats* stats = nullptr);

struct ScenarioSpec {
  Topology topology = Topology::manhattan;
  int radius = 1;
  ThetaScheme theta_scheme = ThetaScheme::random_uniform;
  int height = 51;
  int width = 51;
  int steps = 10;                          // T
  std::optional<double> snr_db = 40.0;     // nullopt: noiseless observations
  std::uint64_t seed = 0;
  // When set, the initial configuration is drawn from this seed instead of
  // the scenario seed; suites use it to share x(0) across all scenarios.
  std::optional<std::uint64_t> init_seed;

  NeighborhoodSpec neighborhood() const { return {topology, radius}; }
  std::string name() const;  // e.g. "manhattan-r2-random"
  void validate() const;     // radius >= 1, steps >= 1, dims >= 2r+1
};

struct ObservedDataset {
  ScenarioSpec spec;
  RuleParams truth;
  std::vector<Configuration> clean;     // T+1 configurations
  std::vector<Configuration> observed;  // clean + noise, clamped
  std::optional<NoiseStats> noise;
};

// Fully deterministic in spec.seed (and spec.init_seed when present):
// x(0) ~ U[0,1) per cell, truth rule per scheme, clean trajectory by
// synchronous evolution, observations by add_noise (or clean when snr unset).
ObservedDataset build_dataset(const ScenarioSpec& spec);

// Directory archive: manifest.json plus per-step grids
// (observed_tNN.csv, clean_tNN.csv).
void write_dataset_archive(const ObservedDataset& data,
                           const std::filesystem::path& dir);
ObservedDataset read_dataset_archive(const std::filesystem::path& dir);

// JSON (de)serialization of the spec, used by suite files and manifests.
std::string scenario_to_json(const ScenarioSpec& spec);

}  // namespace camid
