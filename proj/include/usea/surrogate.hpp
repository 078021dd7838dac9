#pragma once

#include "usea/core.hpp"
#include "usea/gaussian_process.hpp"
#include "usea/random_forest.hpp"
#include "usea/rng.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace usea {

// Training data taken from the archive. Rows keep archive order.
struct TrainingSet {
    Eigen::MatrixXd inputs; // one point per row
    Eigen::VectorXd targets;
    std::size_t tau = 0; // number of records actually used

    std::size_t size() const { return static_cast<std::size_t>(targets.size()); }
};

// The min(tau, |archive|) records with the smallest objective values.
TrainingSet select_training_data(const Archive& archive, std::size_t tau);

enum class SurrogateKind { RF, GP };

std::string to_string(SurrogateKind kind);
SurrogateKind parse_surrogate(const std::string& name);

struct SurrogateConfig {
    SurrogateKind kind = SurrogateKind::RF;
    RandomForestParams rf;
    GaussianProcessParams gp;
};

using SurrogateModel = std::variant<RandomForestModel, GaussianProcessModel>;

// GP failures surface as GpFitError; the engine decides on a fallback.
SurrogateModel fit(const SurrogateConfig& config, const TrainingSet& ts, RngStream& rng);

Eigen::VectorXd predict(const SurrogateModel& model, const Eigen::MatrixXd& xs);
Prediction predict_with_uncertainty(const SurrogateModel& model, const Eigen::MatrixXd& xs);

// Closed-form expected improvement below `best` (minimization).
double expected_improvement(double mean, double stddev, double best);

double normal_pdf(double z);
double normal_cdf(double z);

struct Selection {
    std::size_t best_index = 0;            // offspring index of O*
    Individual best;                       // O*, tagged with its prediction
    Population unevaluated{Role::Unevaluated}; // P_u
    std::vector<std::size_t> unevaluated_indices;
    Eigen::VectorXd predictions;
};

// O* is the offspring with the lowest prediction (lowest index on ties);
// P_u holds the next `pu_size` offspring by predicted rank, defaulting to
// |offspring| / 2.
Selection select_by_prediction(const Population& offspring, const Eigen::VectorXd& predictions,
                               std::optional<std::size_t> pu_size = std::nullopt);

Selection model_assisted_select(const Population& offspring, const SurrogateModel& model,
                                std::optional<std::size_t> pu_size = std::nullopt);

} // namespace usea
