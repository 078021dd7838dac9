#pragma once

#include "usea/core.hpp"
#include "usea/rng.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>

namespace usea {

// ---------------------------------------------------------------- GA

struct GAParams {
    double beta1 = 1.0;  // mixing probability
    double beta2 = 0.8;  // selection probability
    double eta_c = 20.0; // SBX distribution index
    double eta_m = 20.0; // PM distribution index
    double crossover_prob = 1.0;
    double swap_prob = 0.5;       // per-variable SBX probability
    std::optional<double> p_m;    // per-variable mutation probability, 1/n when unset

    double mutation_prob(Eigen::Index n) const { return p_m ? *p_m : 1.0 / static_cast<double>(n); }
    void validate() const;
};

// Binary tournament generalised to k draws with replacement. The lowest
// fitness wins; among equal fitness the earliest draw wins.
const Individual& tournament_select(const Population& pop, std::size_t k, RngStream& rng);

// Winner among an explicit list of drawn member indices.
const Individual& tournament_winner(const Population& pop, std::span<const std::size_t> draws);

// SBX children for a given per-variable spread factor beta; spread == 1
// reproduces the parents.
std::pair<DecisionVector, DecisionVector> sbx_children(const DecisionVector& p1,
                                                       const DecisionVector& p2,
                                                       const DecisionVector& spread);

// SBX spread factor for a uniform draw u in [0, 1).
double sbx_spread(double u, double eta_c);

std::pair<DecisionVector, DecisionVector> sbx_crossover(const DecisionVector& p1,
                                                        const DecisionVector& p2,
                                                        const GAParams& params,
                                                        const Bounds& bounds, RngStream& rng);

// Normalised polynomial-mutation step for a uniform draw u.
double pm_delta(double u, double x, double lb, double ub, double eta_m);

// x + delta * (ub - lb), clipped to the box.
DecisionVector apply_mutation(const DecisionVector& x, const DecisionVector& delta,
                              const Bounds& bounds);

DecisionVector polynomial_mutation(const DecisionVector& x, const GAParams& params,
                                   const Bounds& bounds, RngStream& rng);

// Plain GA: N offspring from tournament-selected pairs of P_e.
Population ga_offspring(const Population& evaluated, std::size_t n, const GAParams& params,
                        const Bounds& bounds, RngStream& rng);

// GA that mixes unevaluated parents into each pair with probability beta1.
// With an empty P_u (or beta1 == 0) it draws exactly the same numbers as
// ga_offspring and yields identical offspring.
Population ga_reproduce(const Population& evaluated, const Population& unevaluated, std::size_t n,
                        const GAParams& params, const Bounds& bounds, RngStream& rng);

// ---------------------------------------------------------------- DE

enum class DEVariant { Rand1, Rand2, Best1, Best2, CurrentToBest1 };

std::size_t de_arity(DEVariant variant);
std::string to_string(DEVariant variant);
DEVariant parse_de_variant(const std::string& name);

struct DEParams {
    double F = 0.5;
    double Cr = 0.9;
    DEVariant variant = DEVariant::Best2;

    void validate() const;
};

inline constexpr std::size_t kDePoolSize = 5;

// Mutant vector; pool members are used as r1, r2, ... in order.
DecisionVector de_mutant(DEVariant variant, const DecisionVector& target,
                         const DecisionVector& best, std::span<const DecisionVector> pool,
                         double F);

// Binomial crossover with one forced mutant component.
DecisionVector de_crossover(const DecisionVector& target, const DecisionVector& mutant, double Cr,
                            RngStream& rng);

DecisionVector boundary_repair(const DecisionVector& x, const Bounds& bounds);

// Plain DE over P_e: one trial per target, followed by polynomial mutation.
Population de_offspring(const Population& evaluated, const DEParams& params,
                        const GAParams& ga_params, const Bounds& bounds, RngStream& rng);

// DE whose difference vectors are drawn from P_e and P_u together, while
// targets and the best vector come from P_e only. Requires |P_e| == n.
Population de_reproduce(const Population& evaluated, const Population& unevaluated, std::size_t n,
                        const DEParams& params, const GAParams& ga_params, const Bounds& bounds,
                        RngStream& rng);

// ---------------------------------------------------------------- EDA

struct EDAParams {
    std::size_t K = 10;

    void validate() const;
};

// Variable-width histogram: one row of K+1 ascending edges and K bin
// probabilities per dimension. The first and last bins run from the box
// bounds to the population extremes and carry a small fixed weight.
struct VWHModel {
    Eigen::MatrixXd edges; // n x (K + 1)
    Eigen::MatrixXd probs; // n x K

    Eigen::Index dim() const { return edges.rows(); }
    Eigen::Index bins() const { return probs.cols(); }
};

inline constexpr double kVwhBoundaryWeight = 0.1;

VWHModel vwh_build(const Population& pop, std::size_t K, const Bounds& bounds);

// Per-dimension independent sampling: categorical bin, then uniform in it.
Population vwh_sample(const VWHModel& model, std::size_t n, RngStream& rng);

Population eda_offspring(const Population& evaluated, std::size_t n, const EDAParams& params,
                         const Bounds& bounds, RngStream& rng);

// Histogram built on P_e and P_u together.
Population eda_reproduce(const Population& evaluated, const Population& unevaluated, std::size_t n,
                         const EDAParams& params, const Bounds& bounds, RngStream& rng);

// ---------------------------------------------------------------- dispatch

enum class OperatorKind { GA, DE, EDA };

std::string to_string(OperatorKind kind);
OperatorKind parse_operator(const std::string& name);

struct OperatorConfig {
    OperatorKind kind = OperatorKind::EDA;
    GAParams ga;
    DEParams de;
    EDAParams eda;
};

Population reproduce(const OperatorConfig& op, const Population& evaluated,
                     const Population& unevaluated, std::size_t n, const Bounds& bounds,
                     RngStream& rng);

} // namespace usea
