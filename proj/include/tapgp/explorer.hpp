#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tapgp/surface_model.hpp"
#include "tapgp/tap_env.hpp"

namespace tapgp {

enum class Strategy { WeightedExploration, UncertaintyOnly, RandomSearch, GridSearch };

[[nodiscard]] std::string_view to_string(Strategy s);
/// Accepts weighted|uncertainty|random|grid (and the full enum spellings).
[[nodiscard]] Strategy parse_strategy(std::string_view name);

struct RunConfig {
  std::uint64_t seed = 0;
  int budget = 17;
  int n_initial_random = 3;
  int grid_resolution = 47;
  SurfaceModelConfig model{};
  Strategy strategy = Strategy::WeightedExploration;
  /// Capture acquisition maps before the first tap and after every k-th tap; 0 disables.
  int snapshot_every = 0;

  void validate() const;
};

/// Name of the generator behind every seeded draw.
inline constexpr std::string_view kRngName = "std::mt19937_64";

/// Uniform integer in [0, n) by rejection sampling; identical on every platform.
[[nodiscard]] std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

struct TapRecord {
  int iteration = 0;
  /// "initial_random" for seeding taps, otherwise the strategy name.
  std::string source;
  std::size_t grid_index = 0;
  Point2 position;
  TapResult result;
  int cumulative_on_surface = 0;
};

struct MapSnapshot {
  /// Taps ingested when the snapshot was taken.
  int n_taps = 0;
  AcquisitionMaps maps;
  GridField mean;
};

struct RunTrace {
  RunConfig config;
  std::string scene_description;
  std::uint64_t scene_hash = 0;
  std::string rng_name{kRngName};
  std::vector<TapRecord> taps;
  std::vector<MapSnapshot> snapshots;
  /// Set when the run stopped before the budget (e.g. the grid ran out).
  std::optional<std::string> stopped_early;
};

struct RunResult {
  RunTrace trace;
  ExplorationState final_state;
};

/// n_initial_random distinct grid points drawn uniformly, tapped in draw order.
[[nodiscard]] std::vector<TapObservation> initial_taps(const RunConfig& config, const Scene& scene,
                                                       std::mt19937_64& rng);

/// Chooses a grid index per `strategy`, taps it and ingests the result.
/// Throws ExhaustedGrid when no untapped point is left.
TapRecord step(ExplorationState& state, Strategy strategy, const Scene& scene, std::mt19937_64& rng);

/// Initial random taps followed by budget - n_initial_random strategy steps.
[[nodiscard]] RunResult run(const RunConfig& config, const Scene& scene);

}  // namespace tapgp
