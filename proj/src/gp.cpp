#include "tapgp/gp.hpp"

#include <algorithm>
#include <cmath>

namespace tapgp {

void KernelParams::validate() const {
  if (!(lengthscale_sq > 0.0) || !std::isfinite(lengthscale_sq)) {
    throw std::invalid_argument("lengthscale_sq must be positive, got " + std::to_string(lengthscale_sq));
  }
  if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) {
    throw std::invalid_argument("noise_var must be non-negative, got " + std::to_string(noise_var));
  }
  if (!std::isfinite(prior_mean)) {
    throw std::invalid_argument("prior_mean must be finite");
  }
}

void TrainingSet::validate() const {
  if (inputs.size() != values.size()) {
    throw std::invalid_argument("training set has " + std::to_string(inputs.size()) + " inputs but " +
                                std::to_string(values.size()) + " values");
  }
  for (const auto& p : inputs) {
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
      throw std::invalid_argument("training input outside the unit square");
    }
  }
}

double rbf(const Point2& a, const Point2& b, const KernelParams& params) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::exp(-(dx * dx + dy * dy) / (2.0 * params.lengthscale_sq));
}

Eigen::MatrixXd kernel_matrix(std::span<const Point2> xs, std::span<const Point2> ys, const KernelParams& params) {
  Eigen::MatrixXd k(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
  for (Eigen::Index j = 0; j < k.cols(); ++j) {
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
      k(i, j) = rbf(xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(j)], params);
    }
  }
  return k;
}

FittedGP::FittedGP(KernelParams params) : params_(params) { params_.validate(); }

FittedGP FittedGP::fit(TrainingSet train, const KernelParams& params) {
  params.validate();
  train.validate();

  FittedGP gp(params);
  const auto n = static_cast<Eigen::Index>(train.size());
  if (n > 0) {
    Eigen::MatrixXd k = kernel_matrix(train.inputs, train.inputs, params);
    k.diagonal().array() += params.noise_var;

    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) {
      throw FactorizationFailure("kernel matrix of " + std::to_string(n) +
                                 " points is not positive-definite (duplicate inputs with noise_var = " +
                                 std::to_string(params.noise_var) + "?)");
    }
    Eigen::VectorXd residual = Eigen::Map<const Eigen::VectorXd>(train.values.data(), n);
    residual.array() -= params.prior_mean;

    gp.factor_ = llt.matrixL();
    gp.weights_ = llt.solve(residual);
  }
  gp.train_ = std::move(train);
  return gp;
}

Prediction FittedGP::predict(const Point2& query) const {
  const auto n = static_cast<Eigen::Index>(train_.size());
  if (n == 0) {
    return {params_.prior_mean, 1.0};
  }
  Eigen::VectorXd k_star(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k_star(i) = rbf(train_.inputs[static_cast<std::size_t>(i)], query, params_);
  }
  const double mean = params_.prior_mean + k_star.dot(weights_);
  // v = L^-1 k_*, so k_*^T (K + s I)^-1 k_* = |v|^2.
  const Eigen::VectorXd v = factor_.triangularView<Eigen::Lower>().solve(k_star);
  const double variance = std::max(0.0, 1.0 - v.squaredNorm());
  return {mean, variance};
}

std::vector<Prediction> FittedGP::predict(std::span<const Point2> queries) const {
  std::vector<Prediction> out;
  out.reserve(queries.size());
  for (const auto& q : queries) {
    out.push_back(predict(q));
  }
  return out;
}

}  // namespace tapgp
