#include "usea/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace usea {

std::size_t RandomForestParams::mtry(Eigen::Index n) const
{
    const auto dims = static_cast<std::size_t>(n);
    const std::size_t m = features_per_split ? *features_per_split : dims / 3;
    return std::clamp<std::size_t>(m, 1, dims);
}

namespace {

struct Split {
    Eigen::Index feature = -1;
    double threshold = 0.0;
    double score = -1.0; // sum_L^2 / n_L + sum_R^2 / n_R
};

// Training rows sorted by each feature, computed once per forest.
std::vector<std::vector<std::uint32_t>> feature_orders(const Eigen::MatrixXd& X)
{
    std::vector<std::vector<std::uint32_t>> orders(static_cast<std::size_t>(X.cols()));
    for (Eigen::Index f = 0; f < X.cols(); ++f) {
        auto& o = orders[static_cast<std::size_t>(f)];
        o.resize(static_cast<std::size_t>(X.rows()));
        std::iota(o.begin(), o.end(), std::uint32_t{0});
        std::stable_sort(o.begin(), o.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return X(a, f) < X(b, f); });
    }
    return orders;
}

// Each node owns the same range [begin, end) of every per-feature list;
// the lists hold the node's rows sorted by that feature and are stably
// partitioned on every split, so no node needs a sort.
class TreeBuilder {
public:
    TreeBuilder(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const RandomForestParams& params,
                RngStream& rng, std::vector<RegressionTree::Node>& nodes,
                const std::vector<std::vector<std::uint32_t>>& orders,
                const std::vector<std::size_t>& rows)
        : X_(X), y_(y), params_(params), rng_(rng), nodes_(nodes),
          features_(static_cast<std::size_t>(X.cols())), mtry_(params.mtry(X.cols()))
    {
        std::iota(features_.begin(), features_.end(), Eigen::Index{0});
        std::vector<std::uint32_t> multiplicity(static_cast<std::size_t>(X.rows()), 0);
        for (auto r : rows)
            ++multiplicity[r];
        sorted_.resize(orders.size());
        for (std::size_t f = 0; f < orders.size(); ++f) {
            auto& list = sorted_[f];
            list.resize(rows.size());
            std::size_t k = 0;
            for (auto r : orders[f])
                for (std::uint32_t c = 0; c < multiplicity[r]; ++c)
                    list[k++] = r;
        }
        goes_left_.assign(static_cast<std::size_t>(X.rows()), 0);
        buffer_.resize(rows.size());
    }

    std::size_t size() const { return sorted_.empty() ? 0 : sorted_.front().size(); }

    std::int32_t build(std::size_t begin, std::size_t end, std::size_t depth)
    {
        const std::size_t count = end - begin;
        const auto& any = sorted_.front();
        double sum = 0.0, lo = y_(any[begin]), hi = lo;
        for (std::size_t i = begin; i < end; ++i) {
            const double v = y_(any[i]);
            sum += v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const auto id = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back({});
        nodes_[static_cast<std::size_t>(id)].value = sum / static_cast<double>(count);

        const bool depth_capped = params_.max_depth > 0 && depth >= params_.max_depth;
        if (depth_capped || count < 2 * params_.min_samples_leaf || lo == hi)
            return id;

        const Split split = best_split(begin, end, sum);
        if (split.feature < 0)
            return id;

        const std::size_t mid = partition(begin, end, split);
        const std::int32_t left = build(begin, mid, depth + 1);
        const std::int32_t right = build(mid, end, depth + 1);
        auto& node = nodes_[static_cast<std::size_t>(id)];
        node.feature = static_cast<std::int32_t>(split.feature);
        node.threshold = split.threshold;
        node.left = left;
        node.right = right;
        return id;
    }

private:
    // Examines features in random order; stops after mtry features once a
    // valid split exists, otherwise keeps going through the rest.
    Split best_split(std::size_t begin, std::size_t end, double total) const
    {
        const std::size_t count = end - begin;
        const std::size_t min_leaf = std::max<std::size_t>(1, params_.min_samples_leaf);
        Split best;
        const std::size_t nf = features_.size();
        for (std::size_t f = 0; f < nf; ++f) {
            std::swap(features_[f], features_[f + rng_.uniform_index(nf - f)]);
            if (f >= mtry_ && best.feature >= 0)
                break;
            const Eigen::Index feat = features_[f];
            const auto& list = sorted_[static_cast<std::size_t>(feat)];
            const double* col = X_.col(feat).data();
            double left_sum = 0.0;
            for (std::size_t p = 1; p < count; ++p) {
                const auto prev = list[begin + p - 1];
                left_sum += y_(prev);
                if (p < min_leaf || count - p < min_leaf)
                    continue;
                const double a = col[prev], b = col[list[begin + p]];
                if (!(a < b))
                    continue;
                const double nl = static_cast<double>(p);
                const double nr = static_cast<double>(count - p);
                const double right_sum = total - left_sum;
                const double score = left_sum * left_sum / nl + right_sum * right_sum / nr;
                if (score > best.score) {
                    double thr = 0.5 * (a + b);
                    if (!(thr < b))
                        thr = a;
                    best = {feat, thr, score};
                }
            }
        }
        return best;
    }

    std::size_t partition(std::size_t begin, std::size_t end, const Split& split)
    {
        const auto& chosen = sorted_[static_cast<std::size_t>(split.feature)];
        std::size_t n_left = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const auto r = chosen[i];
            goes_left_[r] = X_(r, split.feature) <= split.threshold;
            n_left += goes_left_[r];
        }
        // Lists only need to stay sorted for children that split again;
        // otherwise the first list alone keeps track of membership.
        const std::size_t leaf_below = 2 * params_.min_samples_leaf;
        const bool any_splits = n_left >= leaf_below || end - begin - n_left >= leaf_below;
        const std::size_t lists = any_splits ? sorted_.size() : 1;
        for (std::size_t li = 0; li < lists; ++li) {
            auto& list = sorted_[li];
            std::size_t l = begin, r = 0;
            for (std::size_t i = begin; i < end; ++i) {
                const auto row = list[i];
                const std::size_t g = goes_left_[row];
                list[l] = row;
                buffer_[r] = row;
                l += g;
                r += 1 - g;
            }
            std::copy(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(r),
                      list.begin() + static_cast<std::ptrdiff_t>(l));
        }
        return begin + n_left;
    }

    const Eigen::MatrixXd& X_;
    const Eigen::VectorXd& y_;
    const RandomForestParams& params_;
    RngStream& rng_;
    std::vector<RegressionTree::Node>& nodes_;
    mutable std::vector<Eigen::Index> features_;
    std::size_t mtry_;
    std::vector<std::vector<std::uint32_t>> sorted_;
    std::vector<std::uint8_t> goes_left_;
    std::vector<std::uint32_t> buffer_;
};

void grow(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const std::vector<std::size_t>& rows,
          const RandomForestParams& params, RngStream& rng,
          const std::vector<std::vector<std::uint32_t>>& orders,
          std::vector<RegressionTree::Node>& nodes)
{
    TreeBuilder builder(X, y, params, rng, nodes, orders, rows);
    builder.build(0, builder.size(), 0);
}

} // namespace

RegressionTree RegressionTree::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                   std::vector<std::size_t> rows, const RandomForestParams& params,
                                   RngStream& rng)
{
    return fit(X, y, rows, params, rng, feature_orders(X));
}

RegressionTree RegressionTree::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                   const std::vector<std::size_t>& rows,
                                   const RandomForestParams& params, RngStream& rng,
                                   const std::vector<std::vector<std::uint32_t>>& orders)
{
    if (rows.empty())
        throw std::invalid_argument("RegressionTree: no training rows");
    for (auto r : rows)
        if (r >= static_cast<std::size_t>(X.rows()))
            throw std::out_of_range("RegressionTree: row index out of range");
    RegressionTree tree;
    grow(X, y, rows, params, rng, orders, tree.nodes_);
    return tree;
}

double RegressionTree::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const
{
    std::size_t i = 0;
    while (nodes_[i].feature >= 0)
        i = static_cast<std::size_t>(x(nodes_[i].feature) <= nodes_[i].threshold ? nodes_[i].left
                                                                                  : nodes_[i].right);
    return nodes_[i].value;
}

std::size_t RegressionTree::depth() const
{
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    std::size_t deepest = 0;
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (nodes_[i].feature >= 0) {
            stack.emplace_back(static_cast<std::size_t>(nodes_[i].left), d + 1);
            stack.emplace_back(static_cast<std::size_t>(nodes_[i].right), d + 1);
        }
    }
    return deepest;
}

RandomForestModel RandomForestModel::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                         const RandomForestParams& params, RngStream& rng)
{
    if (X.rows() != y.size())
        throw std::invalid_argument("RandomForest: inputs/targets length mismatch");
    if (X.rows() < 1 || X.cols() < 1)
        throw std::invalid_argument("RandomForest: empty training set");
    if (params.n_trees == 0)
        throw std::invalid_argument("RandomForest: n_trees must be positive");

    RandomForestModel model;
    model.dim_ = X.cols();
    model.trees_.reserve(params.n_trees);
    const auto m = static_cast<std::size_t>(X.rows());
    std::vector<std::size_t> rows(m);
    const auto orders = feature_orders(X);
    for (std::size_t t = 0; t < params.n_trees; ++t) {
        RngStream tree_rng = rng.child(t);
        if (params.bootstrap) {
            for (auto& r : rows)
                r = tree_rng.uniform_index(m);
        } else {
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }
        model.trees_.push_back(RegressionTree::fit(X, y, rows, params, tree_rng, orders));
    }
    return model;
}

Eigen::MatrixXd RandomForestModel::tree_outputs(const Eigen::MatrixXd& xs) const
{
    if (!trained())
        throw std::logic_error("RandomForest: model is not trained");
    if (xs.cols() != dim_)
        throw std::invalid_argument("RandomForest: dimension mismatch");
    Eigen::MatrixXd out(xs.rows(), static_cast<Eigen::Index>(trees_.size()));
    for (Eigen::Index i = 0; i < xs.rows(); ++i) {
        const Eigen::VectorXd x = xs.row(i).transpose();
        for (std::size_t t = 0; t < trees_.size(); ++t)
            out(i, static_cast<Eigen::Index>(t)) = trees_[t].predict(x);
    }
    return out;
}

Eigen::VectorXd RandomForestModel::predict(const Eigen::MatrixXd& xs) const
{
    return tree_outputs(xs).rowwise().mean();
}

Prediction RandomForestModel::predict_with_uncertainty(const Eigen::MatrixXd& xs) const
{
    const Eigen::MatrixXd out = tree_outputs(xs);
    Prediction p;
    p.mean = out.rowwise().mean();
    p.stddev = ((out.colwise() - p.mean).array().square().rowwise().mean()).sqrt().matrix();
    return p;
}

} // namespace usea
