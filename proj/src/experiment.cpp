#include "tapgp/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace tapgp {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string describe_key(std::string_view section, std::string_view key) {
  return "[" + std::string(section) + "] " + std::string(key);
}

double parse_double(std::string_view section, std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
    throw ConfigError(describe_key(section, key) + ": expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

long long parse_int(std::string_view section, std::string_view key, std::string_view v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(describe_key(section, key) + ": expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

int parse_small_int(std::string_view section, std::string_view key, std::string_view v) {
  const long long x = parse_int(section, key, v);
  if (x < -1'000'000'000LL || x > 1'000'000'000LL) {
    throw ConfigError(describe_key(section, key) + ": value out of range");
  }
  return static_cast<int>(x);
}

std::uint64_t parse_seed(std::string_view section, std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(describe_key(section, key) + ": expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool parse_bool(std::string_view section, std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(describe_key(section, key) + ": expected true or false, got '" + std::string(v) + "'");
}

std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto item = trim(v.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

/// "0-19", "1,2,5" or a mix such as "0-4, 10".
std::vector<std::uint64_t> parse_seed_list(std::string_view section, std::string_view key, std::string_view v) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(v)) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(parse_seed(section, key, item));
      continue;
    }
    const auto lo = parse_seed(section, key, trim(std::string_view(item).substr(0, dash)));
    const auto hi = parse_seed(section, key, trim(std::string_view(item).substr(dash + 1)));
    if (hi < lo || hi - lo > 100000) {
      throw ConfigError(describe_key(section, key) + ": bad seed range '" + item + "'");
    }
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  }
  if (out.empty()) throw ConfigError(describe_key(section, key) + ": empty seed list");
  return out;
}

const std::map<std::string, std::vector<std::string>, std::less<>>& all_sections() {
  static const std::map<std::string, std::vector<std::string>, std::less<>> sections = {
      {"scene", {"object", "placement_x_cm", "placement_y_cm", "area_cm", "height_scale_cm", "noise_sd_cm"}},
      {"run",
       {"seed", "seeds", "budget", "n_initial_random", "grid_resolution", "strategy", "lengthscale_sq", "noise_var",
        "prior_mean", "weight_lengthscale_sq", "weight_noise_var", "weight_prior_mean", "desk_in_surface_gp",
        "eval_resolution"}},
      {"output", {"output_dir", "snapshot_every", "emit_pgm"}},
      {"sweep", {"key", "values"}},
  };
  return sections;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string section_of(std::string_view key) {
  for (const auto& [section, keys] : all_sections()) {
    if (section == "sweep" || section == "output") continue;
    if (std::find(keys.begin(), keys.end(), key) != keys.end()) return section;
  }
  return {};
}

}  // namespace

std::vector<std::uint64_t> ExperimentConfig::default_seeds() {
  std::vector<std::uint64_t> s(20);
  for (std::uint64_t i = 0; i < s.size(); ++i) s[i] = i;
  return s;
}

const std::vector<std::string>& section_keys(std::string_view section) {
  const auto& sections = all_sections();
  const auto it = sections.find(section);
  if (it == sections.end()) throw ConfigError("unknown section [" + std::string(section) + "]");
  return it->second;
}

std::string nearest_key(std::string_view key) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& [section, keys] : all_sections()) {
    for (const auto& k : keys) {
      const auto d = edit_distance(key, k);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
  }
  return best;
}

void ExperimentConfig::set(std::string_view section, std::string_view key, std::string_view value) {
  std::string sec(section);
  if (sec.empty()) {
    sec = section_of(key);
    if (sec.empty()) {
      throw ConfigError("unknown key '" + std::string(key) + "'; did you mean '" + nearest_key(key) + "'?");
    }
  }
  const auto& keys = section_keys(sec);
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError("unknown key '" + std::string(key) + "' in [" + sec + "]; did you mean '" + nearest_key(key) +
                      "'?");
  }
  const std::string_view s = sec;
  auto num = [&] { return parse_double(s, key, value); };
  auto integer = [&] { return parse_small_int(s, key, value); };

  if (sec == "scene") {
    if (key == "object") {
      if (value != "wave" && value != "slope") {
        throw ConfigError(describe_key(s, key) + ": expected wave or slope, got '" + std::string(value) + "'");
      }
      object = std::string(value);
    } else if (key == "placement_x_cm") {
      scene.placement_x_cm = num();
    } else if (key == "placement_y_cm") {
      scene.placement_y_cm = num();
    } else if (key == "area_cm") {
      // "23" for a square area, "23x23" or "16x6" otherwise.
      const auto x = value.find_first_of("xX");
      if (x == std::string_view::npos) {
        scene.area_x_cm = scene.area_y_cm = num();
      } else {
        scene.area_x_cm = parse_double(s, key, trim(value.substr(0, x)));
        scene.area_y_cm = parse_double(s, key, trim(value.substr(x + 1)));
      }
    } else if (key == "height_scale_cm") {
      scene.height_scale_cm = num();
    } else if (key == "noise_sd_cm") {
      scene.noise_sd_cm = num();
    }
  } else if (sec == "run") {
    if (key == "seed") {
      run.seed = parse_seed(s, key, value);
    } else if (key == "seeds") {
      seeds = parse_seed_list(s, key, value);
    } else if (key == "budget") {
      run.budget = integer();
    } else if (key == "n_initial_random") {
      run.n_initial_random = integer();
    } else if (key == "grid_resolution") {
      run.grid_resolution = integer();
    } else if (key == "strategy") {
      try {
        run.strategy = parse_strategy(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(describe_key(s, key) + ": " + e.what());
      }
    } else if (key == "lengthscale_sq") {
      run.model.surface_kernel.lengthscale_sq = num();
    } else if (key == "noise_var") {
      run.model.surface_kernel.noise_var = num();
    } else if (key == "prior_mean") {
      run.model.surface_kernel.prior_mean = num();
    } else if (key == "weight_lengthscale_sq") {
      run.model.weight_kernel.lengthscale_sq = num();
    } else if (key == "weight_noise_var") {
      run.model.weight_kernel.noise_var = num();
    } else if (key == "weight_prior_mean") {
      run.model.weight_kernel.prior_mean = num();
    } else if (key == "desk_in_surface_gp") {
      run.model.desk_in_surface_gp = parse_bool(s, key, value);
    } else if (key == "eval_resolution") {
      eval_resolution = integer();
    }
  } else if (sec == "output") {
    if (key == "output_dir") {
      if (value.empty()) throw ConfigError("[output] output_dir: must not be empty");
      output_dir = std::filesystem::path(std::string(value));
    } else if (key == "snapshot_every") {
      run.snapshot_every = value == "none" ? 0 : integer();
    } else if (key == "emit_pgm") {
      emit_pgm = parse_bool(s, key, value);
    }
  } else if (sec == "sweep") {
    if (!sweep) sweep.emplace();
    if (key == "key") {
      if (section_of(value).empty()) {
        throw ConfigError("[sweep] key: '" + std::string(value) + "' is not a sweepable key; did you mean '" +
                          nearest_key(value) + "'?");
      }
      sweep->key = std::string(value);
    } else {
      sweep->values = split_list(value);
    }
  }
}

Scene ExperimentConfig::make_scene() const {
  try {
    return Scene(object_by_name(object), scene);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[scene] ") + e.what());
  }
}

void ExperimentConfig::validate() const {
  try {
    run_config().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[run] ") + e.what());
  }
  if (eval_resolution < 2) throw ConfigError("[run] eval_resolution must be at least 2");
  if (seeds.empty()) throw ConfigError("[run] seeds must not be empty");
  (void)make_scene();
  if (sweep) {
    if (sweep->key.empty()) throw ConfigError("[sweep] missing 'key'");
    if (sweep->values.empty()) throw ConfigError("[sweep] 'values' must list at least one value");
    for (const auto& v : sweep->values) {
      ExperimentConfig probe = *this;
      probe.sweep.reset();
      probe.set("", sweep->key, v);
      probe.validate();
    }
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (all_sections().find(section) == all_sections().end()) {
        throw ConfigError(where + "unknown section [" + section + "] (expected scene, run, output or sweep)");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    if (section.empty()) throw ConfigError(where + "key outside of any section");
    try {
      cfg.set(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

void write_heatmap_csv(std::ostream& os, const GridField& field, int resolution) {
  for (int row = resolution - 1; row >= 0; --row) {
    for (int col = 0; col < resolution; ++col) {
      if (col) os << ',';
      os << format_number(field[static_cast<std::size_t>(row) * resolution + col]);
    }
    os << '\n';
  }
}

void write_heatmap_pgm(std::ostream& os, const GridField& field, int resolution) {
  os << "P5\n" << resolution << ' ' << resolution << "\n255\n";
  for (int row = resolution - 1; row >= 0; --row) {
    for (int col = 0; col < resolution; ++col) {
      const double v = std::clamp(field[static_cast<std::size_t>(row) * resolution + col], 0.0, 1.0);
      os.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
  }
}

void write_trace_csv(std::ostream& os, const RunTrace& trace, const Scene& scene) {
  os << kTraceHeader << '\n';
  for (const auto& t : trace.taps) {
    os << t.iteration << ',' << t.source << ',' << format_number(t.position.x) << ','
       << format_number(t.position.y) << ',' << format_number(scene.to_cm_x(t.position.x)) << ','
       << format_number(scene.to_cm_y(t.position.y)) << ',' << format_number(t.result.raw_height_cm) << ','
       << (t.result.on_surface ? 1 : 0) << ',' << t.cumulative_on_surface << '\n';
  }
}

CompareSummary compare_strategies(const ExperimentConfig& cfg) {
  const Scene scene = cfg.make_scene();
  CompareSummary out;
  for (const auto seed : cfg.seeds) {
    RunConfig rc = cfg.run_config();
    rc.seed = seed;
    rc.snapshot_every = 0;
    rc.strategy = Strategy::WeightedExploration;
    const auto weighted = run(rc, scene);
    rc.strategy = Strategy::UncertaintyOnly;
    const auto uncertainty = run(rc, scene);
    if (weighted.trace.stopped_early) throw std::runtime_error("weighted run stopped: " + *weighted.trace.stopped_early);
    if (uncertainty.trace.stopped_early) {
      throw std::runtime_error("uncertainty run stopped: " + *uncertainty.trace.stopped_early);
    }
    CompareRow row;
    row.seed = seed;
    row.on_surface_weighted = count_on_surface(weighted.trace);
    row.on_surface_uncertainty = count_on_surface(uncertainty.trace);
    row.improvement = effective_tap_improvement(weighted.trace, uncertainty.trace);
    out.rows.push_back(row);
  }
  const auto n = static_cast<double>(out.rows.size());
  out.min_improvement = out.rows.front().improvement;
  out.max_improvement = out.rows.front().improvement;
  for (const auto& r : out.rows) {
    out.mean_improvement += r.improvement / n;
    out.mean_on_surface_weighted += r.on_surface_weighted / n;
    out.mean_on_surface_uncertainty += r.on_surface_uncertainty / n;
    out.min_improvement = std::min(out.min_improvement, r.improvement);
    out.max_improvement = std::max(out.max_improvement, r.improvement);
  }
  return out;
}

void write_compare_csv(std::ostream& os, const CompareSummary& summary) {
  os << kCompareHeader << '\n';
  for (const auto& r : summary.rows) {
    os << r.seed << ',' << r.on_surface_weighted << ',' << r.on_surface_uncertainty << ','
       << format_number(r.improvement) << '\n';
  }
  os << "mean," << format_number(summary.mean_on_surface_weighted) << ','
     << format_number(summary.mean_on_surface_uncertainty) << ',' << format_number(summary.mean_improvement) << '\n';
}

}  // namespace tapgp
