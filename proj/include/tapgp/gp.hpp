#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tapgp {

/// Planar position in normalized search-area coordinates.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Hyperparameters of the unit-amplitude RBF kernel.
///
/// `lengthscale_sq` is the squared lengthscale in normalized coordinates,
/// `noise_var` is added to the training-kernel diagonal and `prior_mean` is
/// the constant GP prior mean.
struct KernelParams {
  double lengthscale_sq = 0.017;
  double noise_var = 1e-6;
  double prior_mean = 0.0;

  /// Throws std::invalid_argument when lengthscale_sq <= 0 or noise_var < 0.
  void validate() const;
};

struct TrainingSet {
  std::vector<Point2> inputs;
  std::vector<double> values;

  [[nodiscard]] std::size_t size() const { return inputs.size(); }
  [[nodiscard]] bool empty() const { return inputs.empty(); }

  /// Throws std::invalid_argument on length mismatch or inputs outside [0,1]^2.
  void validate() const;
};

struct Prediction {
  double mean = 0.0;
  double variance = 1.0;
};

class FactorizationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[nodiscard]] double rbf(const Point2& a, const Point2& b, const KernelParams& params);

[[nodiscard]] Eigen::MatrixXd kernel_matrix(std::span<const Point2> xs, std::span<const Point2> ys,
                                            const KernelParams& params);

/// Exact GP posterior over a fixed training set.
///
/// Holds the lower Cholesky factor L of K + noise_var * I and the weights
/// solving (K + noise_var * I) w = values - prior_mean. Immutable once built,
/// so concurrent predict() calls are safe.
class FittedGP {
 public:
  /// Prior-only GP (no training data).
  explicit FittedGP(KernelParams params = {});

  /// Throws FactorizationFailure if K + noise_var * I is not positive-definite.
  static FittedGP fit(TrainingSet train, const KernelParams& params);

  [[nodiscard]] Prediction predict(const Point2& query) const;
  [[nodiscard]] std::vector<Prediction> predict(std::span<const Point2> queries) const;

  [[nodiscard]] const TrainingSet& training_set() const { return train_; }
  [[nodiscard]] const KernelParams& params() const { return params_; }
  [[nodiscard]] const Eigen::MatrixXd& factor() const { return factor_; }
  [[nodiscard]] const Eigen::VectorXd& weights() const { return weights_; }

 private:
  TrainingSet train_;
  KernelParams params_;
  Eigen::MatrixXd factor_;
  Eigen::VectorXd weights_;
};

}  // namespace tapgp
