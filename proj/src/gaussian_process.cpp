#include "usea/gaussian_process.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace usea {

Eigen::MatrixXd squared_exponential(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                    double lengthscale)
{
    const Eigen::VectorXd an = a.rowwise().squaredNorm();
    const Eigen::VectorXd bn = b.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = (-2.0 * a * b.transpose()).colwise() + an;
    d2.rowwise() += bn.transpose();
    return (-0.5 / (lengthscale * lengthscale) * d2.cwiseMax(0.0)).array().exp().matrix();
}

GaussianProcessModel GaussianProcessModel::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                               const GaussianProcessParams& params)
{
    if (X.rows() != y.size())
        throw std::invalid_argument("GaussianProcess: inputs/targets length mismatch");
    if (X.rows() < 2)
        throw std::invalid_argument("GaussianProcess: needs at least two training points");
    if (params.grid_points == 0 || !(params.lengthscale_min > 0.0) ||
        params.lengthscale_max < params.lengthscale_min)
        throw std::invalid_argument("GaussianProcess: invalid lengthscale grid");

    GaussianProcessModel m;
    m.x_offset_ = X.colwise().minCoeff().transpose();
    m.x_scale_ = X.colwise().maxCoeff().transpose() - m.x_offset_;
    for (Eigen::Index j = 0; j < m.x_scale_.size(); ++j)
        if (!(m.x_scale_(j) > 0.0))
            m.x_scale_(j) = 1.0;
    m.X_ = m.scale_inputs(X);

    m.y_mean_ = y.mean();
    const double var = (y.array() - m.y_mean_).square().mean();
    m.y_scale_ = var > 0.0 ? std::sqrt(var) : 1.0;
    const Eigen::VectorXd z = (y.array() - m.y_mean_) / m.y_scale_;
    const auto n = static_cast<double>(X.rows());

    const double start_noise = std::max(params.noise, params.min_jitter);
    double best_lml = -std::numeric_limits<double>::infinity();
    const auto g = params.grid_points;
    for (std::size_t k = 0; k < g; ++k) {
        const double t = g == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(g - 1);
        const double ell = params.lengthscale_min *
                           std::pow(params.lengthscale_max / params.lengthscale_min, t);
        const Eigen::MatrixXd K = squared_exponential(m.X_, m.X_, ell);
        for (double noise = start_noise; noise <= params.max_jitter * (1.0 + 1e-9); noise *= 10.0) {
            Eigen::MatrixXd Kn = K;
            Kn.diagonal().array() += noise;
            Eigen::LLT<Eigen::MatrixXd> llt(Kn);
            if (llt.info() != Eigen::Success)
                continue;
            const Eigen::VectorXd alpha = llt.solve(z);
            const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
            const double lml = -0.5 * z.dot(alpha) - 0.5 * logdet -
                               0.5 * n * std::log(2.0 * std::numbers::pi);
            if (std::isfinite(lml) && lml > best_lml) {
                best_lml = lml;
                m.lengthscale_ = ell;
                m.noise_ = noise;
                m.llt_ = llt;
                m.alpha_ = alpha;
            }
            break;
        }
    }
    if (!std::isfinite(best_lml))
        throw GpFitError("GaussianProcess: kernel factorization failed at maximum jitter");
    m.lml_ = best_lml;
    m.trained_ = true;
    return m;
}

Eigen::MatrixXd GaussianProcessModel::scale_inputs(const Eigen::MatrixXd& xs) const
{
    return (xs.rowwise() - x_offset_.transpose()).array().rowwise() / x_scale_.transpose().array();
}

Eigen::MatrixXd GaussianProcessModel::cross_kernel(const Eigen::MatrixXd& scaled) const
{
    return squared_exponential(scaled, X_, lengthscale_);
}

Eigen::VectorXd GaussianProcessModel::predict(const Eigen::MatrixXd& xs) const
{
    if (!trained_)
        throw std::logic_error("GaussianProcess: model is not trained");
    if (xs.cols() != dim())
        throw std::invalid_argument("GaussianProcess: dimension mismatch");
    const Eigen::MatrixXd Ks = cross_kernel(scale_inputs(xs));
    return ((Ks * alpha_).array() * y_scale_ + y_mean_).matrix();
}

Prediction GaussianProcessModel::predict_with_uncertainty(const Eigen::MatrixXd& xs) const
{
    if (!trained_)
        throw std::logic_error("GaussianProcess: model is not trained");
    if (xs.cols() != dim())
        throw std::invalid_argument("GaussianProcess: dimension mismatch");
    const Eigen::MatrixXd Ks = cross_kernel(scale_inputs(xs));
    Prediction p;
    p.mean = ((Ks * alpha_).array() * y_scale_ + y_mean_).matrix();
    const Eigen::MatrixXd v = llt_.matrixL().solve(Ks.transpose());
    const Eigen::ArrayXd var = (1.0 - v.colwise().squaredNorm().array()).max(0.0);
    p.stddev = (var.sqrt() * y_scale_).matrix();
    return p;
}

} // namespace usea
