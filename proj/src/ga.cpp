#include "usea/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace usea {

namespace {

void check_prob(double p, const char* what)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

void check_fitness(const Population& pop)
{
    for (const auto& m : pop)
        if (!m.has_fitness())
            throw std::invalid_argument("tournament: member without fitness");
}

} // namespace

void GAParams::validate() const
{
    check_prob(beta1, "beta1");
    check_prob(beta2, "beta2");
    check_prob(crossover_prob, "crossover_prob");
    check_prob(swap_prob, "swap_prob");
    if (p_m)
        check_prob(*p_m, "p_m");
    if (!(eta_c > 0.0) || !(eta_m > 0.0))
        throw std::invalid_argument("distribution indices must be positive");
}

const Individual& tournament_winner(const Population& pop, std::span<const std::size_t> draws)
{
    if (draws.empty())
        throw std::invalid_argument("tournament: no draws");
    std::size_t best = draws.front();
    for (std::size_t d : draws.subspan(1))
        if (pop[d].value() < pop[best].value())
            best = d;
    return pop[best];
}

const Individual& tournament_select(const Population& pop, std::size_t k, RngStream& rng)
{
    if (pop.empty())
        throw std::invalid_argument("tournament: empty population");
    if (k == 0)
        throw std::invalid_argument("tournament: k must be positive");
    check_fitness(pop);
    std::size_t best = rng.uniform_index(pop.size());
    for (std::size_t i = 1; i < k; ++i) {
        const std::size_t d = rng.uniform_index(pop.size());
        if (pop[d].value() < pop[best].value())
            best = d;
    }
    return pop[best];
}

double sbx_spread(double u, double eta_c)
{
    const double e = 1.0 / (eta_c + 1.0);
    if (u <= 0.5)
        return std::pow(2.0 * u, e);
    return std::pow(1.0 / (2.0 * (1.0 - u)), e);
}

std::pair<DecisionVector, DecisionVector> sbx_children(const DecisionVector& p1,
                                                       const DecisionVector& p2,
                                                       const DecisionVector& spread)
{
    if (p1.size() != p2.size() || p1.size() != spread.size())
        throw std::invalid_argument("sbx: dimension mismatch");
    const auto b = spread.array();
    DecisionVector c1 = 0.5 * ((1.0 + b) * p1.array() + (1.0 - b) * p2.array()).matrix();
    DecisionVector c2 = 0.5 * ((1.0 - b) * p1.array() + (1.0 + b) * p2.array()).matrix();
    return {std::move(c1), std::move(c2)};
}

std::pair<DecisionVector, DecisionVector> sbx_crossover(const DecisionVector& p1,
                                                        const DecisionVector& p2,
                                                        const GAParams& params,
                                                        const Bounds& bounds, RngStream& rng)
{
    if (p1.size() != p2.size() || p1.size() != bounds.dim())
        throw std::invalid_argument("sbx: dimension mismatch");
    const Eigen::Index n = p1.size();
    const bool cross = rng.uniform() < params.crossover_prob;
    DecisionVector spread = DecisionVector::Ones(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double u_swap = rng.uniform();
        const double u_beta = rng.uniform();
        if (cross && u_swap < params.swap_prob)
            spread(j) = sbx_spread(u_beta, params.eta_c);
    }
    auto [c1, c2] = sbx_children(p1, p2, spread);
    return {bounds.clamp(c1), bounds.clamp(c2)};
}

double pm_delta(double u, double x, double lb, double ub, double eta_m)
{
    const double range = ub - lb;
    const double d1 = (x - lb) / range;
    const double d2 = (ub - x) / range;
    const double p = 1.0 / (eta_m + 1.0);
    if (u < 0.5) {
        const double v = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta_m + 1.0);
        return std::pow(v, p) - 1.0;
    }
    const double v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta_m + 1.0);
    return 1.0 - std::pow(v, p);
}

DecisionVector apply_mutation(const DecisionVector& x, const DecisionVector& delta,
                              const Bounds& bounds)
{
    return bounds.clamp(x + delta.cwiseProduct(bounds.width()));
}

DecisionVector polynomial_mutation(const DecisionVector& x, const GAParams& params,
                                   const Bounds& bounds, RngStream& rng)
{
    if (x.size() != bounds.dim())
        throw std::invalid_argument("pm: dimension mismatch");
    const Eigen::Index n = x.size();
    const double pm = params.mutation_prob(n);
    DecisionVector delta = DecisionVector::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double u_mut = rng.uniform();
        const double u = rng.uniform();
        if (u_mut < pm)
            delta(j) = pm_delta(u, x(j), bounds.lower()(j), bounds.upper()(j), params.eta_m);
    }
    return apply_mutation(x, delta, bounds);
}

namespace {

void check_ga_inputs(const Population& evaluated, std::size_t n, const GAParams& params)
{
    params.validate();
    if (evaluated.size() < 2)
        throw std::invalid_argument("ga: P_e needs at least two members");
    if (n % 2 != 0)
        throw std::invalid_argument("ga: offspring count must be even");
}

void breed(const DecisionVector& p1, const DecisionVector& p2, const GAParams& params,
           const Bounds& bounds, RngStream& rng, Population& out)
{
    auto [c1, c2] = sbx_crossover(p1, p2, params, bounds, rng);
    out.push_back(Individual(polynomial_mutation(c1, params, bounds, rng)));
    out.push_back(Individual(polynomial_mutation(c2, params, bounds, rng)));
}

} // namespace

Population ga_offspring(const Population& evaluated, std::size_t n, const GAParams& params,
                        const Bounds& bounds, RngStream& rng)
{
    check_ga_inputs(evaluated, n, params);
    Population out(Role::Offspring);
    out.reserve(n);
    for (std::size_t i = 0; i < n / 2; ++i) {
        const Individual& a = tournament_select(evaluated, 2, rng);
        const Individual& b = tournament_select(evaluated, 2, rng);
        breed(a.x(), b.x(), params, bounds, rng, out);
    }
    return out;
}

Population ga_reproduce(const Population& evaluated, const Population& unevaluated, std::size_t n,
                        const GAParams& params, const Bounds& bounds, RngStream& rng)
{
    check_ga_inputs(evaluated, n, params);
    Population out(Role::Offspring);
    out.reserve(n);
    const bool mixing = !unevaluated.empty() && params.beta1 > 0.0;
    for (std::size_t i = 0; i < n / 2; ++i) {
        const Individual* p1 = &tournament_select(evaluated, 2, rng);
        const Individual* p2 = &tournament_select(evaluated, 2, rng);
        if (mixing && rng.uniform() < params.beta1) {
            const Individual& u1 = tournament_select(unevaluated, 2, rng);
            const Individual& u2 = tournament_select(unevaluated, 2, rng);
            if (rng.uniform() < params.beta2) {
                p1 = &u1;
                p2 = &u2;
            } else if (rng.uniform() < 0.5) {
                p2 = &u2;
            } else {
                p1 = &u1;
            }
        }
        breed(p1->x(), p2->x(), params, bounds, rng, out);
    }
    return out;
}

} // namespace usea
