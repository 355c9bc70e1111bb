#include <algorithm>
#include <fstream>
#include <iostream>
#include <locale>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "tapgp/experiment.hpp"

namespace tapgp {

namespace fs = std::filesystem;

namespace {

/// Collects the files of one command; removes them unless commit() is called.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) { make_dir(dir_); }

  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& f : files_) fs::remove(dir_ / f, ec);
    for (auto it = created_dirs_.rbegin(); it != created_dirs_.rend(); ++it) fs::remove(*it, ec);
  }

  template <typename Writer>
  void write(const fs::path& rel, Writer&& writer) {
    const fs::path full = dir_ / rel;
    make_dir(full.parent_path());
    files_.push_back(rel);
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + full.string() + "' for writing");
    out.imbue(std::locale::classic());
    writer(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + full.string() + "'");
  }

  CommandOutput commit() {
    committed_ = true;
    return {dir_, files_};
  }

 private:
  void make_dir(const fs::path& d) {
    if (d.empty() || fs::exists(d)) return;
    make_dir(d.parent_path());
    fs::create_directory(d);
    created_dirs_.push_back(d);
  }

  fs::path dir_;
  std::vector<fs::path> files_;
  std::vector<fs::path> created_dirs_;
  bool committed_ = false;
};

fs::path resolve_dir(const ExperimentConfig& cfg, const CommandOptions& opts) {
  return opts.output_dir.value_or(cfg.output_dir);
}

double mean_of(const GridField& f) { return std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size()); }

void write_manifest(std::ostream& os, std::string_view command, const ExperimentConfig& cfg, const Scene& scene) {
  const RunConfig rc = cfg.run_config();
  os << "command: " << command << '\n'
     << "scene: " << scene.describe() << '\n'
     << "scene_hash: " << std::hex << scene.hash() << std::dec << '\n'
     << "rng: " << kRngName << '\n'
     << "seed: " << rc.seed << '\n'
     << "seeds: ";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) os << (i ? "," : "") << cfg.seeds[i];
  os << '\n'
     << "strategy: " << to_string(rc.strategy) << '\n'
     << "budget: " << rc.budget << '\n'
     << "n_initial_random: " << rc.n_initial_random << '\n'
     << "grid_resolution: " << rc.grid_resolution << '\n'
     << "surface_kernel: lengthscale_sq=" << format_number(rc.model.surface_kernel.lengthscale_sq)
     << " noise_var=" << format_number(rc.model.surface_kernel.noise_var)
     << " prior_mean=" << format_number(rc.model.surface_kernel.prior_mean) << '\n'
     << "weight_kernel: lengthscale_sq=" << format_number(rc.model.weight_kernel.lengthscale_sq)
     << " noise_var=" << format_number(rc.model.weight_kernel.noise_var)
     << " prior_mean=" << format_number(rc.model.weight_kernel.prior_mean) << '\n'
     << "desk_in_surface_gp: " << (rc.model.desk_in_surface_gp ? "true" : "false") << '\n'
     << "eval_resolution: " << cfg.eval_resolution << '\n'
     << "improvement: (on_surface_weighted - on_surface_uncertainty) / budget\n";
}

std::string fingerprint(const ExperimentConfig& cfg) {
  std::ostringstream os;
  write_manifest(os, "", cfg, cfg.make_scene());
  return os.str();
}

void write_metrics_row(std::ostream& os, const RunResult& result, const Scene& scene, int eval_resolution) {
  const auto m = compute_metrics(result, scene, eval_resolution);
  const auto& fs = result.final_state;
  os << to_string(result.trace.config.strategy) << ',' << result.trace.config.seed << ',' << m.n_taps << ','
     << m.n_on_surface << ',' << format_number(m.on_surface_ratio) << ',' << format_number(m.final_rmse_cm) << ','
     << format_number(mean_of(uncertainty_map(fs, fs.grid()))) << '\n';
}

}  // namespace

CommandOutput cmd_run(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const Scene scene = cfg.make_scene();
  const RunConfig rc = cfg.run_config();
  const RunResult result = run(rc, scene);
  if (result.trace.stopped_early) throw std::runtime_error("run stopped early: " + *result.trace.stopped_early);

  OutputSet out(resolve_dir(cfg, opts));
  out.write("manifest.txt", [&](std::ostream& os) { write_manifest(os, "run", cfg, scene); });
  out.write("trace.csv", [&](std::ostream& os) { write_trace_csv(os, result.trace, scene); });
  out.write("metrics.csv", [&](std::ostream& os) {
    os << kMetricsHeader << '\n';
    write_metrics_row(os, result, scene, cfg.eval_resolution);
  });

  const int res = rc.grid_resolution;
  for (const auto& snap : result.trace.snapshots) {
    if (snap.n_taps == 0) continue;
    char tag[16];
    std::snprintf(tag, sizeof(tag), "%03d", snap.n_taps);
    const std::pair<const char*, const GridField*> fields[] = {
        {"uncertainty", &snap.maps.uncertainty},
        {"weight", &snap.maps.weight},
        {"exploration", &snap.maps.exploration},
        {"mean", &snap.mean},
    };
    for (const auto& [name, field] : fields) {
      const std::string stem = std::string("heatmaps/") + name + "_" + tag;
      out.write(stem + ".csv", [&](std::ostream& os) { write_heatmap_csv(os, *field, res); });
      if (cfg.emit_pgm) {
        out.write(stem + ".pgm", [&](std::ostream& os) { write_heatmap_pgm(os, *field, res); });
      }
    }
  }

  const int on = count_on_surface(result.trace);
  if (!opts.quiet) {
    log << "run: " << to_string(rc.strategy) << " seed " << rc.seed << ": " << on << "/" << result.trace.taps.size()
        << " taps on surface\n";
  }
  return out.commit();
}

CommandOutput cmd_compare(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const Scene scene = cfg.make_scene();
  const CompareSummary summary = compare_strategies(cfg);

  OutputSet out(resolve_dir(cfg, opts));
  out.write("manifest.txt", [&](std::ostream& os) { write_manifest(os, "compare", cfg, scene); });
  out.write("compare.csv", [&](std::ostream& os) { write_compare_csv(os, summary); });
  out.write("compare_summary.csv", [&](std::ostream& os) {
    os << "statistic,improvement\n"
       << "mean," << format_number(summary.mean_improvement) << '\n'
       << "min," << format_number(summary.min_improvement) << '\n'
       << "max," << format_number(summary.max_improvement) << '\n';
  });

  if (!opts.quiet) {
    const auto budget = cfg.run_config().budget;
    log << "compare: " << summary.rows.size() << " paired seeds, budget " << budget << '\n'
        << "  mean on-surface taps: weighted " << format_number(summary.mean_on_surface_weighted)
        << ", uncertainty-only " << format_number(summary.mean_on_surface_uncertainty) << '\n'
        << "  effective-tap improvement = (on_weighted - on_uncertainty) / " << budget << ": mean "
        << format_number(100.0 * summary.mean_improvement) << "%, min "
        << format_number(100.0 * summary.min_improvement) << "%, max "
        << format_number(100.0 * summary.max_improvement) << "%\n";
  }
  return out.commit();
}

CommandOutput cmd_sweep(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  if (!cfg.sweep || cfg.sweep->key.empty() || cfg.sweep->values.empty()) {
    throw ConfigError("sweep requires a [sweep] section with 'key' and a non-empty 'values' list");
  }
  const auto& sweep = *cfg.sweep;

  // Values that leave the default config unchanged get a label.
  static const std::vector<std::string> paper_keys = {"lengthscale_sq", "budget", "n_initial_random"};
  const ExperimentConfig defaults;

  std::ostringstream rows;
  rows.imbue(std::locale::classic());
  for (const auto& value : sweep.values) {
    ExperimentConfig cell = cfg;
    cell.sweep.reset();
    cell.set("", sweep.key, value);
    cell.validate();

    ExperimentConfig probe = defaults;
    probe.set("", sweep.key, value);
    std::string label;
    if (fingerprint(probe) == fingerprint(defaults)) {
      const bool from_paper = std::find(paper_keys.begin(), paper_keys.end(), sweep.key) != paper_keys.end();
      label = from_paper ? "paper_default" : "default";
    }

    const Scene scene = cell.make_scene();
    const RunResult result = run(cell.run_config(), scene);
    if (result.trace.stopped_early) {
      throw std::runtime_error("sweep cell " + sweep.key + "=" + value + " stopped: " + *result.trace.stopped_early);
    }
    rows << sweep.key << ',' << value << ',' << label << ',';
    write_metrics_row(rows, result, scene, cell.eval_resolution);
    if (!opts.quiet) {
      log << "sweep " << sweep.key << "=" << value << (label.empty() ? "" : " (" + label + ")") << ": "
          << count_on_surface(result.trace) << "/" << result.trace.taps.size() << " taps on surface\n";
    }
  }

  OutputSet out(resolve_dir(cfg, opts));
  out.write("manifest.txt", [&](std::ostream& os) {
    write_manifest(os, "sweep", cfg, cfg.make_scene());
    os << "sweep: " << sweep.key << " over ";
    for (std::size_t i = 0; i < sweep.values.size(); ++i) os << (i ? "," : "") << sweep.values[i];
    os << '\n';
  });
  out.write("sweep.csv", [&](std::ostream& os) { os << "sweep_key,sweep_value,label," << kMetricsHeader << '\n' << rows.str(); });
  return out.commit();
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Active tapping surface reconstruction simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  bool quiet = false;
  app.add_option("--output-dir", output_dir, "Override [output] output_dir");
  app.add_flag("--quiet", quiet, "Suppress progress output");

  auto* run_cmd = app.add_subcommand("run", "Run one exploration and write trace, metrics and heatmaps");
  auto* cmp_cmd = app.add_subcommand("compare", "Paired-seed weighted vs uncertainty-only comparison");
  auto* sweep_cmd = app.add_subcommand("sweep", "Run one cell per value of the [sweep] key");
  for (auto* sub : {run_cmd, cmp_cmd, sweep_cmd}) {
    sub->add_option("config", config_path, "Experiment config (INI)")->required();
    sub->add_option("--output-dir", output_dir, "Override [output] output_dir");
    sub->add_flag("--quiet", quiet, "Suppress progress output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CommandOptions opts;
  opts.quiet = quiet;
  if (!output_dir.empty()) opts.output_dir = output_dir;

  try {
    const ExperimentConfig cfg = load_config(config_path);
    if (run_cmd->parsed()) {
      cmd_run(cfg, opts, std::cout);
    } else if (cmp_cmd->parsed()) {
      cmd_compare(cfg, opts, std::cout);
    } else {
      cmd_sweep(cfg, opts, std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace tapgp
