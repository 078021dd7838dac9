#pragma once

#include "usea/core.hpp"
#include "usea/operators.hpp"
#include "usea/problems.hpp"
#include "usea/surrogate.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace usea {

enum class Variant {
    USEA,     // one real evaluation per generation, P_u fed back into reproduction
    AL,       // evaluates every model-selected solution, no P_u
    NS,       // like USEA but P_u is discarded before reproduction
    Baseline, // no surrogate: every offspring is evaluated
};

std::string to_string(Variant v);         // "usea", "al", "ns", "baseline"
std::string display_name(Variant v);      // "USEA", "USEA-AL", "USEA-NS", "EDA-LS-lite"
Variant parse_variant(const std::string& name);

struct UseaConfig {
    std::string problem = "Ellipsoid";
    Eigen::Index dim = 20;
    std::size_t pop_size = 50;  // N
    std::size_t max_fes = 500;  // FEs
    OperatorConfig op;
    SurrogateConfig surrogate;
    std::optional<std::size_t> tau; // 2N when unset
    Variant variant = Variant::USEA;
    std::uint64_t seed = 0;

    std::size_t training_size() const { return tau ? *tau : 2 * pop_size; }
    void validate() const;
};

struct GenerationRecord {
    std::size_t generation = 0;
    std::size_t fes = 0;                      // evaluations after this generation
    std::size_t evaluated = 0;                // real evaluations this generation
    std::optional<double> best_predicted;     // O* prediction
    std::optional<double> best_evaluated;     // O* true value
    std::size_t pu_size = 0;
    std::optional<double> pu_pred_min, pu_pred_mean, pu_pred_max;
    bool surrogate_fallback = false;          // GP failed, RF used instead
};

struct RunTrace {
    UseaConfig config;
    std::vector<double> best_curve; // best-so-far after each evaluation, length FEs
    DecisionVector final_x;
    double final_f = 0.0;
    std::vector<GenerationRecord> generations;
    std::size_t evaluations = 0; // real objective calls
    std::size_t fallbacks = 0;
    double wall_clock = 0.0; // seconds
};

// Test and diagnostic hooks.
struct RunHooks {
    // Called with the P_u about to be handed to reproduction.
    std::function<void(Population&)> before_reproduce;
    // Called after every real evaluation.
    std::function<void(const DecisionVector&, double)> on_evaluate;
};

// The surrogate-assisted loop with unevaluated solutions. Requires
// config.variant == Variant::USEA.
RunTrace usea_run(const UseaConfig& config, const RunHooks& hooks = {});

// Ablation and baseline variants; rejects Variant::USEA.
RunTrace run_variant(const UseaConfig& config, const RunHooks& hooks = {});

// Dispatches on config.variant.
RunTrace run(const UseaConfig& config, const RunHooks& hooks = {});

} // namespace usea
