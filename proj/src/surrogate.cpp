#include "usea/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace usea {

TrainingSet select_training_data(const Archive& archive, std::size_t tau)
{
    if (tau == 0)
        throw std::invalid_argument("select_training_data: tau must be positive");
    if (archive.empty())
        throw std::invalid_argument("select_training_data: empty archive");
    const auto& recs = archive.records();
    std::vector<double> ys;
    ys.reserve(recs.size());
    for (const auto& r : recs)
        ys.push_back(r.y);
    std::vector<std::size_t> chosen = best_indices(ys, tau);
    std::sort(chosen.begin(), chosen.end());

    TrainingSet ts;
    ts.tau = chosen.size();
    ts.inputs.resize(static_cast<Eigen::Index>(chosen.size()), archive.bounds().dim());
    ts.targets.resize(static_cast<Eigen::Index>(chosen.size()));
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        ts.inputs.row(row) = recs[chosen[i]].x.transpose();
        ts.targets(row) = recs[chosen[i]].y;
    }
    return ts;
}

std::string to_string(SurrogateKind kind)
{
    return kind == SurrogateKind::RF ? "rf" : "gp";
}

SurrogateKind parse_surrogate(const std::string& name)
{
    if (name == "rf" || name == "RF")
        return SurrogateKind::RF;
    if (name == "gp" || name == "GP")
        return SurrogateKind::GP;
    throw std::invalid_argument("unknown surrogate: " + name);
}

SurrogateModel fit(const SurrogateConfig& config, const TrainingSet& ts, RngStream& rng)
{
    if (ts.size() < 2)
        throw std::invalid_argument("fit: needs at least two training points");
    if (config.kind == SurrogateKind::GP)
        return GaussianProcessModel::fit(ts.inputs, ts.targets, config.gp);
    return RandomForestModel::fit(ts.inputs, ts.targets, config.rf, rng);
}

Eigen::VectorXd predict(const SurrogateModel& model, const Eigen::MatrixXd& xs)
{
    return std::visit([&](const auto& m) { return m.predict(xs); }, model);
}

Prediction predict_with_uncertainty(const SurrogateModel& model, const Eigen::MatrixXd& xs)
{
    return std::visit([&](const auto& m) { return m.predict_with_uncertainty(xs); }, model);
}

double normal_pdf(double z)
{
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double expected_improvement(double mean, double stddev, double best)
{
    if (stddev < 0.0)
        throw std::invalid_argument("expected_improvement: negative stddev");
    const double gain = best - mean;
    if (stddev == 0.0)
        return std::max(gain, 0.0);
    const double z = gain / stddev;
    return std::max(gain * normal_cdf(z) + stddev * normal_pdf(z), 0.0);
}

Selection select_by_prediction(const Population& offspring, const Eigen::VectorXd& predictions,
                               std::optional<std::size_t> pu_size)
{
    if (offspring.size() < 2)
        throw std::invalid_argument("model_assisted_select: needs at least two offspring");
    if (static_cast<std::size_t>(predictions.size()) != offspring.size())
        throw std::invalid_argument("model_assisted_select: prediction count mismatch");
    if (!all_finite(predictions))
        throw std::invalid_argument("model_assisted_select: non-finite prediction");

    const std::size_t m = offspring.size();
    const std::size_t k = std::min(pu_size.value_or(m / 2), m - 1);
    std::vector<double> values(predictions.data(), predictions.data() + predictions.size());
    const std::vector<std::size_t> order = best_indices(values, k + 1);

    Selection sel;
    sel.predictions = predictions;
    sel.best_index = order.front();
    sel.best = Individual(offspring[order.front()].x(), Predicted{values[order.front()]});
    for (std::size_t r = 1; r < order.size(); ++r) {
        sel.unevaluated_indices.push_back(order[r]);
        sel.unevaluated.push_back(Individual(offspring[order[r]].x(), Predicted{values[order[r]]}));
    }
    return sel;
}

Selection model_assisted_select(const Population& offspring, const SurrogateModel& model,
                                std::optional<std::size_t> pu_size)
{
    return select_by_prediction(offspring, predict(model, offspring.as_matrix()), pu_size);
}

} // namespace usea
