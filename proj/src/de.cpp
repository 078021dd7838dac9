#include "usea/operators.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <vector>

namespace usea {

std::size_t de_arity(DEVariant variant)
{
    switch (variant) {
    case DEVariant::Rand1: return 3;
    case DEVariant::Rand2: return 5;
    case DEVariant::Best1: return 2;
    case DEVariant::Best2: return 4;
    case DEVariant::CurrentToBest1: return 2;
    }
    throw std::logic_error("de_arity: unhandled variant");
}

std::string to_string(DEVariant variant)
{
    switch (variant) {
    case DEVariant::Rand1: return "rand/1";
    case DEVariant::Rand2: return "rand/2";
    case DEVariant::Best1: return "best/1";
    case DEVariant::Best2: return "best/2";
    case DEVariant::CurrentToBest1: return "current-to-best/1";
    }
    throw std::logic_error("to_string: unhandled variant");
}

DEVariant parse_de_variant(const std::string& name)
{
    for (auto v : {DEVariant::Rand1, DEVariant::Rand2, DEVariant::Best1, DEVariant::Best2,
                   DEVariant::CurrentToBest1})
        if (to_string(v) == name)
            return v;
    throw std::invalid_argument("unknown DE variant: " + name);
}

void DEParams::validate() const
{
    if (!(F > 0.0))
        throw std::invalid_argument("DE: F must be positive");
    if (!(Cr >= 0.0 && Cr <= 1.0))
        throw std::invalid_argument("DE: Cr must lie in [0, 1]");
}

DecisionVector de_mutant(DEVariant variant, const DecisionVector& target,
                         const DecisionVector& best, std::span<const DecisionVector> pool,
                         double F)
{
    if (pool.size() < de_arity(variant))
        throw std::invalid_argument("de_mutant: pool too small for " + to_string(variant));
    const auto& r = pool;
    switch (variant) {
    case DEVariant::Rand1: return r[0] + F * (r[1] - r[2]);
    case DEVariant::Rand2: return r[0] + F * (r[1] - r[2]) + F * (r[3] - r[4]);
    case DEVariant::Best1: return best + F * (r[0] - r[1]);
    case DEVariant::Best2: return best + F * (r[0] - r[1]) + F * (r[2] - r[3]);
    case DEVariant::CurrentToBest1: return target + F * (best - target) + F * (r[0] - r[1]);
    }
    throw std::logic_error("de_mutant: unhandled variant");
}

DecisionVector de_crossover(const DecisionVector& target, const DecisionVector& mutant, double Cr,
                            RngStream& rng)
{
    if (target.size() != mutant.size())
        throw std::invalid_argument("de_crossover: dimension mismatch");
    const Eigen::Index n = target.size();
    const auto forced = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::size_t>(n)));
    DecisionVector trial = target;
    for (Eigen::Index j = 0; j < n; ++j)
        if (rng.uniform() < Cr || j == forced)
            trial(j) = mutant(j);
    return trial;
}

DecisionVector boundary_repair(const DecisionVector& x, const Bounds& bounds)
{
    return bounds.clamp(x);
}

namespace {

// kDePoolSize distinct indices from [0, m) excluding `skip`, by rejection.
std::array<std::size_t, kDePoolSize> draw_pool(std::size_t m, std::size_t skip, RngStream& rng)
{
    std::array<std::size_t, kDePoolSize> out{};
    std::size_t count = 0;
    while (count < kDePoolSize) {
        const std::size_t r = rng.uniform_index(m);
        if (r == skip || std::find(out.begin(), out.begin() + count, r) != out.begin() + count)
            continue;
        out[count++] = r;
    }
    return out;
}

std::size_t argmin_value(const Population& pop)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i)
        if (pop[i].value() < pop[best].value())
            best = i;
    return best;
}

DecisionVector make_trial(const DecisionVector& target, const DecisionVector& best,
                          const std::array<const DecisionVector*, kDePoolSize>& picks,
                          const DEParams& params, const GAParams& ga_params, const Bounds& bounds,
                          RngStream& rng)
{
    std::array<DecisionVector, kDePoolSize> pool;
    for (std::size_t k = 0; k < kDePoolSize; ++k)
        pool[k] = *picks[k];
    const DecisionVector mutant = de_mutant(params.variant, target, best, pool, params.F);
    const DecisionVector trial = boundary_repair(de_crossover(target, mutant, params.Cr, rng), bounds);
    return polynomial_mutation(trial, ga_params, bounds, rng);
}

void check_evaluated(const Population& pop)
{
    for (const auto& m : pop)
        if (!m.is_evaluated())
            throw std::invalid_argument("de: P_e members must carry evaluated fitness");
}

} // namespace

Population de_offspring(const Population& evaluated, const DEParams& params,
                        const GAParams& ga_params, const Bounds& bounds, RngStream& rng)
{
    params.validate();
    check_evaluated(evaluated);
    const std::size_t m = evaluated.size();
    if (m < kDePoolSize + 1)
        throw std::invalid_argument("de: population needs at least six members");
    const DecisionVector& best = evaluated[argmin_value(evaluated)].x();
    Population out(Role::Offspring);
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto idx = draw_pool(m, i, rng);
        std::array<const DecisionVector*, kDePoolSize> picks{};
        for (std::size_t k = 0; k < kDePoolSize; ++k)
            picks[k] = &evaluated[idx[k]].x();
        out.push_back(Individual(make_trial(evaluated[i].x(), best, picks, params, ga_params, bounds, rng)));
    }
    return out;
}

Population de_reproduce(const Population& evaluated, const Population& unevaluated, std::size_t n,
                        const DEParams& params, const GAParams& ga_params, const Bounds& bounds,
                        RngStream& rng)
{
    params.validate();
    check_evaluated(evaluated);
    if (evaluated.size() != n)
        throw std::invalid_argument("de_reproduce: |P_e| must equal N");
    const std::size_t m = evaluated.size() + unevaluated.size();
    if (m < kDePoolSize + 1)
        throw std::invalid_argument("de_reproduce: |P_e u P_u| needs at least six members");
    std::vector<const DecisionVector*> merged;
    merged.reserve(m);
    for (const auto& ind : evaluated)
        merged.push_back(&ind.x());
    for (const auto& ind : unevaluated)
        merged.push_back(&ind.x());

    const DecisionVector& best = evaluated[argmin_value(evaluated)].x();
    Population out(Role::Offspring);
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = draw_pool(m, i, rng);
        std::array<const DecisionVector*, kDePoolSize> picks{};
        for (std::size_t k = 0; k < kDePoolSize; ++k)
            picks[k] = merged[idx[k]];
        out.push_back(Individual(make_trial(evaluated[i].x(), best, picks, params, ga_params, bounds, rng)));
    }
    return out;
}

} // namespace usea
