#pragma once

#include "usea/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace usea {

struct RandomForestParams {
    std::size_t n_trees = 100;
    std::size_t max_depth = 0; // 0 = unlimited
    std::size_t min_samples_leaf = 2;
    std::optional<std::size_t> features_per_split; // max(1, n / 3) when unset
    bool bootstrap = true;

    std::size_t mtry(Eigen::Index n) const;
};

// Axis-aligned CART regression tree; leaves store the mean target.
class RegressionTree {
public:
    struct Node {
        std::int32_t feature = -1; // -1 marks a leaf
        double threshold = 0.0;    // go left when x[feature] <= threshold
        std::int32_t left = -1;
        std::int32_t right = -1;
        double value = 0.0;
    };

    static RegressionTree fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              std::vector<std::size_t> rows, const RandomForestParams& params,
                              RngStream& rng);

    // Same, with the per-feature row orderings of X precomputed.
    static RegressionTree fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              const std::vector<std::size_t>& rows, const RandomForestParams& params,
                              RngStream& rng, const std::vector<std::vector<std::uint32_t>>& orders);

    double predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t depth() const;

private:
    std::vector<Node> nodes_;
};

struct Prediction {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;
};

class RandomForestModel {
public:
    RandomForestModel() = default;

    // X holds one training point per row.
    static RandomForestModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 const RandomForestParams& params, RngStream& rng);

    bool trained() const { return !trees_.empty(); }
    Eigen::Index dim() const { return dim_; }
    const std::vector<RegressionTree>& trees() const { return trees_; }

    // Mean over trees, one entry per row of xs.
    Eigen::VectorXd predict(const Eigen::MatrixXd& xs) const;

    // Mean and across-tree standard deviation.
    Prediction predict_with_uncertainty(const Eigen::MatrixXd& xs) const;

private:
    Eigen::MatrixXd tree_outputs(const Eigen::MatrixXd& xs) const;

    std::vector<RegressionTree> trees_;
    Eigen::Index dim_ = 0;
};

} // namespace usea
