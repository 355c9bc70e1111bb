#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tapgp/gp.hpp"

namespace tapgp {

/// One tap: normalized position, normalized height and contact class.
struct TapObservation {
  Point2 position;
  double height = 0.0;
  bool on_surface = false;
};

/// Uniform res x res grid over [0,1]^2, row-major with x varying fastest.
/// Index k maps to column k % res (x) and row k / res (y).
class CandidateGrid {
 public:
  explicit CandidateGrid(int resolution);

  [[nodiscard]] int resolution() const { return resolution_; }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] const std::vector<Point2>& points() const { return points_; }
  [[nodiscard]] const Point2& operator[](std::size_t index) const { return points_[index]; }
  [[nodiscard]] std::size_t index(int row, int col) const;

  /// Grid index whose point coincides with `p` (within 1e-9 per axis), if any.
  [[nodiscard]] std::optional<std::size_t> find(const Point2& p) const;

 private:
  int resolution_;
  std::vector<Point2> points_;
};

/// Scalar field sampled on a CandidateGrid, in grid index order.
using GridField = std::vector<double>;

struct AcquisitionMaps {
  GridField uncertainty;
  GridField weight;
  GridField exploration;
};

enum class SuggestMode { Exploration, UncertaintyOnly };

class ExhaustedGrid : public std::runtime_error {
 public:
  ExhaustedGrid() : std::runtime_error("every candidate grid point has already been tapped") {}
};

/// The weight GP defaults to a short lengthscale (the on/off indicator is a
/// step, not a smooth surface) and a low prior so untouched regions rank
/// below the neighbourhood of confirmed contacts.
struct SurfaceModelConfig {
  KernelParams surface_kernel{0.017, 1e-6, 0.0};
  KernelParams weight_kernel{0.005, 1e-6, 0.02};
  /// When false the height GP is trained on on-surface taps only.
  bool desk_in_surface_gp = true;
};

/// The height GP and the on-surface weight GP, kept in lockstep.
///
/// Both GPs are refit from scratch on every ingest. Grid points hit by an
/// ingested tap are remembered and excluded from suggest_next().
class ExplorationState {
 public:
  ExplorationState(SurfaceModelConfig config, CandidateGrid grid);

  /// Appends the tap to both datasets and refits. Propagates FactorizationFailure.
  void ingest(const TapObservation& obs);

  [[nodiscard]] const SurfaceModelConfig& config() const { return config_; }
  [[nodiscard]] const CandidateGrid& grid() const { return grid_; }
  [[nodiscard]] const std::vector<TapObservation>& surface_obs() const { return surface_obs_; }
  [[nodiscard]] const TrainingSet& weight_obs() const { return weight_gp_.training_set(); }
  [[nodiscard]] const FittedGP& surface_gp() const { return surface_gp_; }
  [[nodiscard]] const FittedGP& weight_gp() const { return weight_gp_; }
  [[nodiscard]] const std::vector<bool>& tapped() const { return tapped_; }
  [[nodiscard]] std::size_t n_taps() const { return surface_obs_.size(); }
  [[nodiscard]] bool exhausted() const { return n_tapped_ == grid_.size(); }

 private:
  SurfaceModelConfig config_;
  CandidateGrid grid_;
  std::vector<TapObservation> surface_obs_;
  FittedGP surface_gp_;
  FittedGP weight_gp_;
  std::vector<bool> tapped_;
  std::size_t n_tapped_ = 0;
};

/// Functional form of ExplorationState::ingest.
[[nodiscard]] ExplorationState ingest_tap(ExplorationState state, const TapObservation& obs);

/// Height-GP posterior variance at every grid point.
[[nodiscard]] GridField uncertainty_map(const ExplorationState& state, const CandidateGrid& grid);

/// Weight-GP posterior mean at every grid point, clamped to [0,1].
[[nodiscard]] GridField weight_map(const ExplorationState& state, const CandidateGrid& grid);

/// exploration[i] = uncertainty[i] * weight[i].
[[nodiscard]] AcquisitionMaps exploration_map(const ExplorationState& state, const CandidateGrid& grid);

/// Height-GP posterior mean at every grid point (normalized units).
[[nodiscard]] GridField mean_map(const ExplorationState& state, const CandidateGrid& grid);

/// Argmax of `field` over untapped indices; ties go to the lowest index.
/// Throws ExhaustedGrid when nothing is left.
[[nodiscard]] std::size_t argmax_untapped(const GridField& field, const std::vector<bool>& tapped);

/// Grid index of the next tap for the given acquisition mode.
[[nodiscard]] std::size_t suggest_next(const ExplorationState& state, SuggestMode mode);

}  // namespace tapgp
