#include "usea/engine.hpp"

#include "usea/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

namespace usea {

std::string to_string(Variant v)
{
    switch (v) {
    case Variant::USEA: return "usea";
    case Variant::AL: return "al";
    case Variant::NS: return "ns";
    case Variant::Baseline: return "baseline";
    }
    throw std::logic_error("to_string: unhandled variant");
}

std::string display_name(Variant v)
{
    switch (v) {
    case Variant::USEA: return "USEA";
    case Variant::AL: return "USEA-AL";
    case Variant::NS: return "USEA-NS";
    case Variant::Baseline: return "EDA-LS-lite";
    }
    throw std::logic_error("display_name: unhandled variant");
}

Variant parse_variant(const std::string& name)
{
    for (auto v : {Variant::USEA, Variant::AL, Variant::NS, Variant::Baseline})
        if (name == to_string(v) || name == display_name(v))
            return v;
    throw std::invalid_argument("unknown variant: " + name);
}

void UseaConfig::validate() const
{
    if (pop_size < 2 || pop_size % 2 != 0)
        throw std::invalid_argument("config: population size must be even and at least 2");
    if (max_fes < pop_size)
        throw std::invalid_argument("config: FEs must be at least N");
    if (training_size() < 2)
        throw std::invalid_argument("config: tau must be at least 2");
    if (op.kind == OperatorKind::DE && pop_size < kDePoolSize + 1)
        throw std::invalid_argument("config: DE needs N >= 6");
    op.ga.validate();
    op.de.validate();
    op.eda.validate();
}

namespace {

class Runner {
public:
    Runner(const UseaConfig& config, const RunHooks& hooks)
        : config_(config), hooks_(hooks), problem_(problem_registry(config.problem, config.dim)),
          archive_(problem_.bounds()), root_(config.seed), init_rng_(root_.child("init")),
          reproduce_rng_(root_.child("reproduce")), surrogate_rng_(root_.child("surrogate")),
          noise_rng_(root_.child("noise"))
    {
        config_.validate();
        trace_.config = config;
        trace_.best_curve.reserve(config.max_fes);
    }

    RunTrace execute()
    {
        const auto start = std::chrono::steady_clock::now();
        initialize();
        switch (config_.variant) {
        case Variant::USEA:
        case Variant::NS: loop_unevaluated(); break;
        case Variant::AL: loop_evaluate_selected(); break;
        case Variant::Baseline: loop_plain(); break;
        }
        const auto& best = archive_.best();
        trace_.final_x = best.x;
        trace_.final_f = best.y;
        trace_.wall_clock =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return std::move(trace_);
    }

private:
    std::size_t remaining() const { return config_.max_fes - archive_.fes(); }

    void evaluate(const DecisionVector& x)
    {
        const double y = problem_.evaluate(x, noise_rng_);
        ++trace_.evaluations;
        archive_ = archive_insert(std::move(archive_), x, y);
        const double prev = trace_.best_curve.empty() ? y : trace_.best_curve.back();
        trace_.best_curve.push_back(std::min(prev, y));
        if (hooks_.on_evaluate)
            hooks_.on_evaluate(x, y);
    }

    void initialize()
    {
        const std::size_t n = std::min(config_.pop_size, config_.max_fes);
        for (const auto& ind : lhs_init(n, problem_.bounds(), init_rng_))
            evaluate(ind.x());
        evaluated_ = population_update(archive_, config_.pop_size);
    }

    Population offspring(Population unevaluated)
    {
        if (hooks_.before_reproduce)
            hooks_.before_reproduce(unevaluated);
        return reproduce(config_.op, evaluated_, unevaluated, config_.pop_size, problem_.bounds(),
                         reproduce_rng_);
    }

    SurrogateModel train(GenerationRecord& rec)
    {
        const TrainingSet ts = select_training_data(archive_, config_.training_size());
        RngStream rng = surrogate_rng_.child(rec.generation);
        try {
            return fit(config_.surrogate, ts, rng);
        } catch (const GpFitError&) {
            SurrogateConfig fallback = config_.surrogate;
            fallback.kind = SurrogateKind::RF;
            rec.surrogate_fallback = true;
            ++trace_.fallbacks;
            return fit(fallback, ts, rng);
        }
    }

    // Offspring that duplicate an archive point or an earlier offspring
    // are dropped so nothing already evaluated is screened again.
    Population novel(const Population& offspring) const
    {
        Population out(Role::Offspring);
        out.reserve(offspring.size());
        for (const auto& ind : offspring) {
            const auto& x = ind.x();
            const bool seen =
                std::any_of(archive_.records().begin(), archive_.records().end(),
                            [&](const ArchiveRecord& r) { return r.x == x; }) ||
                std::any_of(out.begin(), out.end(), [&](const Individual& o) { return o.x() == x; });
            if (!seen)
                out.push_back(ind);
        }
        return out.size() >= 2 ? out : offspring;
    }

    void record_unevaluated(GenerationRecord& rec, const Population& pu) const
    {
        rec.pu_size = pu.size();
        if (pu.empty())
            return;
        double lo = pu[0].value(), hi = lo, sum = 0.0;
        for (const auto& m : pu) {
            lo = std::min(lo, m.value());
            hi = std::max(hi, m.value());
            sum += m.value();
        }
        rec.pu_pred_min = lo;
        rec.pu_pred_max = hi;
        rec.pu_pred_mean = sum / static_cast<double>(pu.size());
    }

    void loop_unevaluated()
    {
        Population unevaluated(Role::Unevaluated);
        const std::size_t half = config_.pop_size / 2;
        while (remaining() > 0) {
            GenerationRecord rec;
            rec.generation = trace_.generations.size() + 1;
            Population parents_u = config_.variant == Variant::NS ? Population(Role::Unevaluated)
                                                                  : std::move(unevaluated);
            const Population children = novel(offspring(std::move(parents_u)));
            const SurrogateModel model = train(rec);
            Selection sel = model_assisted_select(children, model, std::min(half, children.size() - 1));

            rec.best_predicted = sel.best.value();
            evaluate(sel.best.x());
            rec.best_evaluated = archive_.records().back().y;
            rec.evaluated = 1;
            rec.fes = archive_.fes();
            unevaluated = std::move(sel.unevaluated);
            record_unevaluated(rec, unevaluated);
            trace_.generations.push_back(rec);
            evaluated_ = population_update(archive_, config_.pop_size);
        }
    }

    void loop_evaluate_selected()
    {
        const std::size_t half = config_.pop_size / 2;
        while (remaining() > 0) {
            GenerationRecord rec;
            rec.generation = trace_.generations.size() + 1;
            const Population children = novel(offspring(Population(Role::Unevaluated)));
            const SurrogateModel model = train(rec);
            const Eigen::VectorXd pred = predict(model, children.as_matrix());
            std::vector<double> values(pred.data(), pred.data() + pred.size());
            const std::size_t take = std::min({half, remaining(), children.size()});
            const auto order = best_indices(values, take);
            rec.best_predicted = values[order.front()];
            for (std::size_t i : order)
                evaluate(children[i].x());
            rec.best_evaluated = archive_.records()[archive_.size() - order.size()].y;
            rec.evaluated = order.size();
            rec.fes = archive_.fes();
            trace_.generations.push_back(rec);
            evaluated_ = population_update(archive_, config_.pop_size);
        }
    }

    void loop_plain()
    {
        while (remaining() > 0) {
            GenerationRecord rec;
            rec.generation = trace_.generations.size() + 1;
            const Population children = offspring(Population(Role::Unevaluated));
            const std::size_t take = std::min(remaining(), children.size());
            for (std::size_t i = 0; i < take; ++i)
                evaluate(children[i].x());
            rec.evaluated = take;
            rec.fes = archive_.fes();
            trace_.generations.push_back(rec);
            evaluated_ = population_update(archive_, config_.pop_size);
        }
    }

    UseaConfig config_;
    const RunHooks& hooks_;
    Problem problem_;
    Archive archive_;
    RngStream root_, init_rng_, reproduce_rng_, surrogate_rng_, noise_rng_;
    Population evaluated_{Role::Evaluated};
    RunTrace trace_;
};

} // namespace

RunTrace usea_run(const UseaConfig& config, const RunHooks& hooks)
{
    if (config.variant != Variant::USEA)
        throw std::invalid_argument("usea_run: use run_variant for " + display_name(config.variant));
    return Runner(config, hooks).execute();
}

RunTrace run_variant(const UseaConfig& config, const RunHooks& hooks)
{
    if (config.variant == Variant::USEA)
        throw std::invalid_argument("run_variant: USEA is run by usea_run");
    return Runner(config, hooks).execute();
}

RunTrace run(const UseaConfig& config, const RunHooks& hooks)
{
    return config.variant == Variant::USEA ? usea_run(config, hooks) : run_variant(config, hooks);
}

} // namespace usea
