#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tapgp/explorer.hpp"
#include "tapgp/metrics.hpp"
#include "tapgp/tap_env.hpp"

namespace tapgp {

/// Invalid or unreadable experiment configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::string key;
  std::vector<std::string> values;
};

/// Everything one experiment needs, parsed from an INI file with
/// [scene], [run], [output] and [sweep] sections.
struct ExperimentConfig {
  std::string object = "wave";
  Scene::Options scene{};
  RunConfig run{};
  std::vector<std::uint64_t> seeds = default_seeds();
  int eval_resolution = kEvalResolution;

  std::filesystem::path output_dir = "out";
  bool emit_pgm = false;

  std::optional<SweepSpec> sweep;

  /// Seeds 0..19.
  static std::vector<std::uint64_t> default_seeds();

  /// Assigns one key; section may be empty to look the key up by name.
  /// Throws ConfigError for unknown keys or malformed values.
  void set(std::string_view section, std::string_view key, std::string_view value);

  /// Cross-field checks; throws ConfigError.
  void validate() const;

  [[nodiscard]] const RunConfig& run_config() const { return run; }
  [[nodiscard]] Scene make_scene() const;
};

[[nodiscard]] ExperimentConfig parse_config(std::string_view text);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// Valid key names of a section ("scene", "run", "output", "sweep").
[[nodiscard]] const std::vector<std::string>& section_keys(std::string_view section);

/// Valid key closest to `key` by edit distance, across all sections.
[[nodiscard]] std::string nearest_key(std::string_view key);

/// 9 significant digits, '.' separator, independent of the global locale.
[[nodiscard]] std::string format_number(double v);

/// Writes a res x res grid as CSV, top row = largest y.
void write_heatmap_csv(std::ostream& os, const GridField& field, int resolution);

/// Binary PGM (P5), value 1.0 -> 255, values clamped to [0,1], top row = largest y.
void write_heatmap_pgm(std::ostream& os, const GridField& field, int resolution);

inline constexpr std::string_view kTraceHeader =
    "iteration,strategy,x_norm,y_norm,x_cm,y_cm,raw_height_cm,on_surface,cumulative_on_surface";
inline constexpr std::string_view kMetricsHeader =
    "strategy,seed,n_taps,n_on_surface,on_surface_ratio,final_rmse_cm,final_mean_variance";
inline constexpr std::string_view kCompareHeader = "seed,on_surface_weighted,on_surface_uncertainty,improvement";

void write_trace_csv(std::ostream& os, const RunTrace& trace, const Scene& scene);

struct CompareRow {
  std::uint64_t seed = 0;
  int on_surface_weighted = 0;
  int on_surface_uncertainty = 0;
  double improvement = 0.0;
};

struct CompareSummary {
  std::vector<CompareRow> rows;
  double mean_improvement = 0.0;
  double min_improvement = 0.0;
  double max_improvement = 0.0;
  double mean_on_surface_weighted = 0.0;
  double mean_on_surface_uncertainty = 0.0;
};

/// Paired-seed WeightedExploration vs UncertaintyOnly over cfg.seeds.
[[nodiscard]] CompareSummary compare_strategies(const ExperimentConfig& cfg);

void write_compare_csv(std::ostream& os, const CompareSummary& summary);

struct CommandOptions {
  std::optional<std::filesystem::path> output_dir;
  bool quiet = false;
};

/// Files written by a command, relative to the output directory.
struct CommandOutput {
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> files;
};

/// Single run: trace.csv, metrics.csv, manifest.txt and heatmaps/.
CommandOutput cmd_run(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log);
/// Paired comparison: compare.csv, compare_summary.csv, manifest.txt.
CommandOutput cmd_compare(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log);
/// One metrics row per sweep value: sweep.csv, manifest.txt.
CommandOutput cmd_sweep(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log);

/// Parses argv-style arguments and dispatches. Returns 0, 1 (config) or 2 (runtime).
int cli_main(int argc, char** argv);

}  // namespace tapgp
