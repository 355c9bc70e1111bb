#include "tapgp/surface_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tapgp {

CandidateGrid::CandidateGrid(int resolution) : resolution_(resolution) {
  if (resolution < 2) {
    throw std::invalid_argument("grid resolution must be at least 2, got " + std::to_string(resolution));
  }
  const double step = 1.0 / static_cast<double>(resolution - 1);
  points_.reserve(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution));
  for (int row = 0; row < resolution; ++row) {
    for (int col = 0; col < resolution; ++col) {
      // Last row/column pinned to exactly 1.0.
      const double x = col == resolution - 1 ? 1.0 : col * step;
      const double y = row == resolution - 1 ? 1.0 : row * step;
      points_.push_back({x, y});
    }
  }
}

std::size_t CandidateGrid::index(int row, int col) const {
  return static_cast<std::size_t>(row) * static_cast<std::size_t>(resolution_) + static_cast<std::size_t>(col);
}

std::optional<std::size_t> CandidateGrid::find(const Point2& p) const {
  const double scale = static_cast<double>(resolution_ - 1);
  const double col = std::round(p.x * scale);
  const double row = std::round(p.y * scale);
  if (col < 0 || row < 0 || col > scale || row > scale) {
    return std::nullopt;
  }
  const std::size_t idx = index(static_cast<int>(row), static_cast<int>(col));
  const Point2& g = points_[idx];
  if (std::abs(g.x - p.x) > 1e-9 || std::abs(g.y - p.y) > 1e-9) {
    return std::nullopt;
  }
  return idx;
}

ExplorationState::ExplorationState(SurfaceModelConfig config, CandidateGrid grid)
    : config_(config),
      grid_(std::move(grid)),
      surface_gp_(config.surface_kernel),
      weight_gp_(config.weight_kernel),
      tapped_(grid_.size(), false) {}

void ExplorationState::ingest(const TapObservation& obs) {
  const Point2& p = obs.position;
  if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
    throw std::invalid_argument("tap position outside the unit square");
  }

  auto surface_obs = surface_obs_;
  surface_obs.push_back(obs);

  TrainingSet surface_train;
  TrainingSet weight_train;
  for (const auto& o : surface_obs) {
    if (o.on_surface || config_.desk_in_surface_gp) {
      surface_train.inputs.push_back(o.position);
      surface_train.values.push_back(o.height);
    }
    weight_train.inputs.push_back(o.position);
    weight_train.values.push_back(o.on_surface ? 1.0 : 0.0);
  }

  // Fit both before committing so a FactorizationFailure leaves *this intact.
  auto surface_gp = FittedGP::fit(std::move(surface_train), config_.surface_kernel);
  auto weight_gp = FittedGP::fit(std::move(weight_train), config_.weight_kernel);

  surface_obs_ = std::move(surface_obs);
  surface_gp_ = std::move(surface_gp);
  weight_gp_ = std::move(weight_gp);
  if (auto idx = grid_.find(p); idx && !tapped_[*idx]) {
    tapped_[*idx] = true;
    ++n_tapped_;
  }
}

ExplorationState ingest_tap(ExplorationState state, const TapObservation& obs) {
  state.ingest(obs);
  return state;
}

GridField uncertainty_map(const ExplorationState& state, const CandidateGrid& grid) {
  GridField out;
  out.reserve(grid.size());
  for (const auto& p : grid.points()) {
    out.push_back(state.surface_gp().predict(p).variance);
  }
  return out;
}

GridField weight_map(const ExplorationState& state, const CandidateGrid& grid) {
  GridField out;
  out.reserve(grid.size());
  for (const auto& p : grid.points()) {
    out.push_back(std::clamp(state.weight_gp().predict(p).mean, 0.0, 1.0));
  }
  return out;
}

AcquisitionMaps exploration_map(const ExplorationState& state, const CandidateGrid& grid) {
  AcquisitionMaps maps;
  maps.uncertainty = uncertainty_map(state, grid);
  maps.weight = weight_map(state, grid);
  maps.exploration.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    maps.exploration[i] = maps.uncertainty[i] * maps.weight[i];
  }
  return maps;
}

GridField mean_map(const ExplorationState& state, const CandidateGrid& grid) {
  GridField out;
  out.reserve(grid.size());
  for (const auto& p : grid.points()) {
    out.push_back(state.surface_gp().predict(p).mean);
  }
  return out;
}

std::size_t argmax_untapped(const GridField& field, const std::vector<bool>& tapped) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (tapped[i]) {
      continue;
    }
    if (!best || field[i] > field[*best]) {
      best = i;
    }
  }
  if (!best) {
    throw ExhaustedGrid();
  }
  return *best;
}

std::size_t suggest_next(const ExplorationState& state, SuggestMode mode) {
  if (state.exhausted()) {
    throw ExhaustedGrid();
  }
  const auto& grid = state.grid();
  const GridField field =
      mode == SuggestMode::UncertaintyOnly ? uncertainty_map(state, grid) : exploration_map(state, grid).exploration;
  return argmax_untapped(field, state.tapped());
}

}  // namespace tapgp
