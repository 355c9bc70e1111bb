#include "tapgp/explorer.hpp"

#include <limits>
#include <numeric>

namespace tapgp {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::WeightedExploration:
      return "weighted";
    case Strategy::UncertaintyOnly:
      return "uncertainty";
    case Strategy::RandomSearch:
      return "random";
    case Strategy::GridSearch:
      return "grid";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "weighted" || name == "WeightedExploration") return Strategy::WeightedExploration;
  if (name == "uncertainty" || name == "UncertaintyOnly") return Strategy::UncertaintyOnly;
  if (name == "random" || name == "RandomSearch") return Strategy::RandomSearch;
  if (name == "grid" || name == "GridSearch") return Strategy::GridSearch;
  throw std::invalid_argument("unknown strategy '" + std::string(name) +
                              "' (expected weighted, uncertainty, random or grid)");
}

void RunConfig::validate() const {
  if (budget <= 0) throw std::invalid_argument("budget must be positive");
  if (n_initial_random < 0) throw std::invalid_argument("n_initial_random must be non-negative");
  if (n_initial_random > budget) throw std::invalid_argument("n_initial_random must not exceed budget");
  if (grid_resolution < 2) throw std::invalid_argument("grid_resolution must be at least 2");
  if (static_cast<long long>(n_initial_random) > static_cast<long long>(grid_resolution) * grid_resolution) {
    throw std::invalid_argument("n_initial_random exceeds the number of grid points");
  }
  if (snapshot_every < 0) throw std::invalid_argument("snapshot_every must be non-negative");
  model.surface_kernel.validate();
  model.weight_kernel.validate();
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t draw = rng();
  while (draw >= limit) {
    draw = rng();
  }
  return draw % n;
}

namespace {

TapObservation observe(const Scene& scene, const Point2& p, std::mt19937_64& rng, TapResult& raw) {
  raw = scene.tap(p, rng);
  return {p, raw.height, raw.on_surface};
}

}  // namespace

namespace {

struct InitialTap {
  std::size_t grid_index;
  Point2 position;
  TapResult result;
};

std::vector<InitialTap> draw_initial(const RunConfig& config, const Scene& scene, std::mt19937_64& rng) {
  const CandidateGrid grid(config.grid_resolution);
  // Partial Fisher-Yates over the grid indices.
  std::vector<std::size_t> pool(grid.size());
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<InitialTap> out;
  const auto n = static_cast<std::size_t>(config.n_initial_random);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, pool.size() - i));
    std::swap(pool[i], pool[j]);
    const Point2 p = grid[pool[i]];
    out.push_back({pool[i], p, scene.tap(p, rng)});
  }
  return out;
}

}  // namespace

std::vector<TapObservation> initial_taps(const RunConfig& config, const Scene& scene, std::mt19937_64& rng) {
  std::vector<TapObservation> out;
  for (const auto& t : draw_initial(config, scene, rng)) {
    out.push_back({t.position, t.result.height, t.result.on_surface});
  }
  return out;
}

TapRecord step(ExplorationState& state, Strategy strategy, const Scene& scene, std::mt19937_64& rng) {
  if (state.exhausted()) throw ExhaustedGrid();
  const auto& tapped = state.tapped();
  std::size_t idx = 0;
  switch (strategy) {
    case Strategy::WeightedExploration:
      idx = suggest_next(state, SuggestMode::Exploration);
      break;
    case Strategy::UncertaintyOnly:
      idx = suggest_next(state, SuggestMode::UncertaintyOnly);
      break;
    case Strategy::RandomSearch: {
      std::vector<std::size_t> open;
      for (std::size_t i = 0; i < tapped.size(); ++i) {
        if (!tapped[i]) open.push_back(i);
      }
      idx = open[static_cast<std::size_t>(uniform_below(rng, open.size()))];
      break;
    }
    case Strategy::GridSearch:
      while (tapped[idx]) ++idx;
      break;
  }

  TapRecord rec;
  rec.source = std::string(to_string(strategy));
  rec.grid_index = idx;
  rec.position = state.grid()[idx];
  const TapObservation obs = observe(scene, rec.position, rng, rec.result);
  state.ingest(obs);
  return rec;
}

RunResult run(const RunConfig& config, const Scene& scene) {
  config.validate();
  RunTrace trace;
  trace.config = config;
  trace.scene_description = scene.describe();
  trace.scene_hash = scene.hash();

  ExplorationState state(config.model, CandidateGrid(config.grid_resolution));
  std::mt19937_64 rng(config.seed);
  int on_surface = 0;

  auto snapshot = [&] {
    if (config.snapshot_every <= 0) return;
    const int n = static_cast<int>(state.n_taps());
    if (n != 0 && n % config.snapshot_every != 0) return;
    MapSnapshot s;
    s.n_taps = n;
    s.maps = exploration_map(state, state.grid());
    s.mean = mean_map(state, state.grid());
    trace.snapshots.push_back(std::move(s));
  };
  auto record = [&](TapRecord rec) {
    rec.iteration = static_cast<int>(trace.taps.size());
    if (rec.result.on_surface) ++on_surface;
    rec.cumulative_on_surface = on_surface;
    trace.taps.push_back(std::move(rec));
    snapshot();
  };

  snapshot();
  try {
    for (const auto& t : draw_initial(config, scene, rng)) {
      state.ingest({t.position, t.result.height, t.result.on_surface});
      TapRecord rec;
      rec.source = "initial_random";
      rec.grid_index = t.grid_index;
      rec.position = t.position;
      rec.result = t.result;
      record(std::move(rec));
    }
    for (int i = config.n_initial_random; i < config.budget; ++i) {
      record(step(state, config.strategy, scene, rng));
    }
  } catch (const std::exception& e) {
    trace.stopped_early = e.what();
  }
  return {std::move(trace), std::move(state)};
}

}  // namespace tapgp
