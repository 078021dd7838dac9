#pragma once

#include "usea/random_forest.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace usea {

class GpFitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GaussianProcessParams {
    double lengthscale_min = 0.05;
    double lengthscale_max = 2.0;
    std::size_t grid_points = 16;
    double noise = 1e-6;       // relative to the standardized signal variance
    double min_jitter = 1e-10; // floor applied when noise is zero
    double max_jitter = 1e-2;  // escalation limit
};

// Zero-mean GP with an isotropic squared-exponential kernel. Inputs are
// rescaled to the unit box spanned by the training data and targets are
// standardized, so the signal variance is 1 in model units. The
// lengthscale maximizes the log marginal likelihood over a log grid.
class GaussianProcessModel {
public:
    GaussianProcessModel() = default;

    static GaussianProcessModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                    const GaussianProcessParams& params = {});

    bool trained() const { return trained_; }
    Eigen::Index dim() const { return X_.cols(); }
    double lengthscale() const { return lengthscale_; }
    double noise() const { return noise_; }
    double log_marginal_likelihood() const { return lml_; }

    Eigen::VectorXd predict(const Eigen::MatrixXd& xs) const;

    // Posterior mean and latent-function standard deviation.
    Prediction predict_with_uncertainty(const Eigen::MatrixXd& xs) const;

private:
    Eigen::MatrixXd scale_inputs(const Eigen::MatrixXd& xs) const;
    Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& scaled) const;

    bool trained_ = false;
    Eigen::MatrixXd X_; // scaled training inputs
    Eigen::VectorXd x_offset_, x_scale_;
    double y_mean_ = 0.0, y_scale_ = 1.0;
    double lengthscale_ = 1.0, noise_ = 0.0, lml_ = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::VectorXd alpha_;
};

Eigen::MatrixXd squared_exponential(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                    double lengthscale);

} // namespace usea
