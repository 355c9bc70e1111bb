#pragma once

#include <stdexcept>
#include <vector>

#include "tapgp/explorer.hpp"

namespace tapgp {

class EmptyTrace : public std::invalid_argument {
 public:
  EmptyTrace() : std::invalid_argument("trace contains no taps") {}
};

class MismatchedBudgets : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyFootprint : public std::invalid_argument {
 public:
  EmptyFootprint() : std::invalid_argument("no evaluation point lies on the object footprint") {}
};

class MissingSnapshots : public std::invalid_argument {
 public:
  MissingSnapshots() : std::invalid_argument("trace carries no map snapshots") {}
};

struct TraceMetrics {
  int n_taps = 0;
  int n_on_surface = 0;
  double on_surface_ratio = 0.0;
  double final_rmse_cm = 0.0;
  std::vector<double> mean_variance_curve;
};

[[nodiscard]] int count_on_surface(const RunTrace& trace);

[[nodiscard]] double on_surface_ratio(const RunTrace& trace);

/// (on-surface taps of proposed - on-surface taps of baseline) / shared tap count.
/// A 12/17 vs 2/17 pair gives 10/17 = 0.588.
[[nodiscard]] double effective_tap_improvement(const RunTrace& proposed, const RunTrace& baseline);
[[nodiscard]] double effective_tap_improvement(int on_proposed, int on_baseline, int n_taps);

/// RMS of (posterior mean in cm - true height) over eval-grid points on the footprint.
[[nodiscard]] double surface_rmse(const ExplorationState& state, const Scene& scene, const CandidateGrid& eval_grid);

/// Mean uncertainty per snapshot, in snapshot order.
[[nodiscard]] std::vector<double> mean_variance_curve(const RunTrace& trace);

/// Default RMSE evaluation grid resolution.
inline constexpr int kEvalResolution = 93;

[[nodiscard]] TraceMetrics compute_metrics(const RunResult& result, const Scene& scene,
                                           int eval_resolution = kEvalResolution);

}  // namespace tapgp
