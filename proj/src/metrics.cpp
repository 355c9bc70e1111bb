#include "tapgp/metrics.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace tapgp {

int count_on_surface(const RunTrace& trace) {
  int n = 0;
  for (const auto& t : trace.taps) {
    if (t.result.on_surface) ++n;
  }
  return n;
}

double on_surface_ratio(const RunTrace& trace) {
  if (trace.taps.empty()) throw EmptyTrace();
  return static_cast<double>(count_on_surface(trace)) / static_cast<double>(trace.taps.size());
}

double effective_tap_improvement(int on_proposed, int on_baseline, int n_taps) {
  if (n_taps <= 0) throw EmptyTrace();
  return static_cast<double>(on_proposed - on_baseline) / static_cast<double>(n_taps);
}

double effective_tap_improvement(const RunTrace& proposed, const RunTrace& baseline) {
  if (proposed.taps.size() != baseline.taps.size()) {
    throw MismatchedBudgets("traces differ in tap count: " + std::to_string(proposed.taps.size()) + " vs " +
                            std::to_string(baseline.taps.size()));
  }
  return effective_tap_improvement(count_on_surface(proposed), count_on_surface(baseline),
                                   static_cast<int>(proposed.taps.size()));
}

double surface_rmse(const ExplorationState& state, const Scene& scene, const CandidateGrid& eval_grid) {
  const double scale = scene.options().height_scale_cm;
  double sum_sq = 0.0;
  std::size_t n = 0;
  for (const auto& p : eval_grid.points()) {
    if (!scene.on_footprint(p)) continue;
    const double err = state.surface_gp().predict(p).mean * scale - scene.true_height_cm(p);
    sum_sq += err * err;
    ++n;
  }
  if (n == 0) throw EmptyFootprint();
  return std::sqrt(sum_sq / static_cast<double>(n));
}

std::vector<double> mean_variance_curve(const RunTrace& trace) {
  if (trace.snapshots.empty()) throw MissingSnapshots();
  std::vector<double> curve;
  curve.reserve(trace.snapshots.size());
  for (const auto& s : trace.snapshots) {
    const auto& u = s.maps.uncertainty;
    curve.push_back(std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(u.size()));
  }
  return curve;
}

TraceMetrics compute_metrics(const RunResult& result, const Scene& scene, int eval_resolution) {
  TraceMetrics m;
  m.n_taps = static_cast<int>(result.trace.taps.size());
  m.n_on_surface = count_on_surface(result.trace);
  m.on_surface_ratio = m.n_taps > 0 ? static_cast<double>(m.n_on_surface) / m.n_taps : 0.0;
  m.final_rmse_cm = surface_rmse(result.final_state, scene, CandidateGrid(eval_resolution));
  if (!result.trace.snapshots.empty()) {
    m.mean_variance_curve = mean_variance_curve(result.trace);
  }
  return m;
}

}  // namespace tapgp
