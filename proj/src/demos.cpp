#include "usea/demos.hpp"

#include "usea/problems.hpp"
#include "usea/sampling.hpp"
#include "usea/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace usea {

namespace {

double truncated_normal(RngStream& rng, double mean, double sd, double lo, double hi)
{
    for (;;) {
        const double v = rng.normal(mean, sd);
        if (v >= lo && v <= hi)
            return v;
    }
}

double case_value(double x)
{
    return functions::neg_x_sin_x(x);
}

OffspringCondition collect(const OperatorConfig& op, const Population& pe, const Population& pu,
                           const OffspringDemoParams& p, const Bounds& bounds, RngStream rng)
{
    OffspringCondition c;
    c.samples.reserve(p.offspring);
    while (c.samples.size() < p.offspring) {
        const Population batch = reproduce(op, pe, pu, p.pop_size, bounds, rng);
        for (const auto& ind : batch) {
            if (c.samples.size() == p.offspring)
                break;
            c.samples.push_back(ind.x()(0));
        }
    }
    c.histogram.assign(p.histogram_bins, 0);
    const double width = (p.upper - p.lower) / static_cast<double>(p.histogram_bins);
    std::size_t inside = 0;
    for (double v : c.samples) {
        auto bin = static_cast<std::size_t>(std::floor((v - p.lower) / width));
        ++c.histogram[std::min(bin, p.histogram_bins - 1)];
        if (v >= p.region_lo && v <= p.region_hi)
            ++inside;
    }
    c.fraction_in_region = static_cast<double>(inside) / static_cast<double>(c.samples.size());
    return c;
}

} // namespace

OperatorConfig demo_operator(OperatorKind kind)
{
    OperatorConfig op;
    op.kind = kind;
    op.de.variant = DEVariant::Rand1;
    return op;
}

OffspringDemoReport offspring_distribution_demo(const OperatorConfig& op, const RngStream& rng,
                                                const OffspringDemoParams& params)
{
    if (params.pop_size < 2 || params.offspring == 0 || params.histogram_bins == 0 ||
        !(params.lower < params.upper))
        throw std::invalid_argument("offspring_distribution_demo: bad parameters");
    const Bounds bounds = Bounds::uniform(1, params.lower, params.upper);
    RngStream setup = rng.child("setup");

    auto individual = [](double v, Fitness f) {
        return Individual(DecisionVector::Constant(1, v), f);
    };

    std::vector<double> parents(params.pop_size), cluster(params.pop_size);
    for (auto& v : parents)
        v = truncated_normal(setup, params.parent_mean, params.parent_sd, params.lower, params.upper);
    for (auto& v : cluster)
        v = truncated_normal(setup, params.cluster_mean, params.cluster_sd, params.lower, params.upper);

    std::vector<double> fp(parents.size()), fc(cluster.size());
    std::transform(parents.begin(), parents.end(), fp.begin(), case_value);
    std::transform(cluster.begin(), cluster.end(), fc.begin(), case_value);

    // The best screened offspring is evaluated and replaces the worst parent;
    // the next N/2 form P_u.
    const auto corder = best_indices(fc, params.pop_size / 2 + 1);
    const auto porder = best_indices(fp, fp.size());
    parents[porder.back()] = cluster[corder.front()];
    fp[porder.back()] = fc[corder.front()];

    OffspringDemoReport report;
    report.op = op;
    report.params = params;
    for (std::size_t i : best_indices(fp, fp.size()))
        report.evaluated.push_back(individual(parents[i], Evaluated{fp[i]}));
    if (!params.force_empty_pu)
        for (std::size_t r = 1; r < corder.size(); ++r)
            report.unevaluated.push_back(individual(cluster[corder[r]], Predicted{fc[corder[r]]}));

    const RngStream stream = rng.child("offspring");
    report.with_pu = collect(op, report.evaluated, report.unevaluated, params, bounds, stream);
    report.without_pu =
        collect(op, report.evaluated, Population(Role::Unevaluated), params, bounds, stream);
    return report;
}

CaseStudyReport case_study_1d(const RngStream& rng, const CaseStudyParams& params)
{
    if (params.training_points < 2 || params.grid_points < 2 || params.offspring < 2)
        throw std::invalid_argument("case_study_1d: bad parameters");
    const Problem problem = problem_registry("CaseStudy1D", 1);
    const Bounds& bounds = problem.bounds();

    CaseStudyReport report;
    RngStream design = rng.child("design");
    const Population sample = lhs_init(params.training_points, bounds, design);
    const auto m = static_cast<Eigen::Index>(sample.size());
    report.train_x.resize(m);
    report.train_y.resize(m);
    Population evaluated(Role::Evaluated);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& x = sample[static_cast<std::size_t>(i)].x();
        report.train_x(i) = x(0);
        report.train_y(i) = problem.evaluate(x);
        evaluated.push_back(Individual(x, Evaluated{report.train_y(i)}));
    }
    report.incumbent = report.train_y.minCoeff();

    RngStream forest_rng = rng.child("forest");
    const auto model =
        RandomForestModel::fit(report.train_x, report.train_y, params.rf, forest_rng);

    const double lo = bounds.lower()(0), hi = bounds.upper()(0);
    Eigen::MatrixXd grid(static_cast<Eigen::Index>(params.grid_points), 1);
    for (std::size_t i = 0; i < params.grid_points; ++i)
        grid(static_cast<Eigen::Index>(i), 0) =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(params.grid_points - 1);
    const Prediction pred = model.predict_with_uncertainty(grid);
    report.grid.reserve(params.grid_points);
    for (Eigen::Index i = 0; i < grid.rows(); ++i) {
        CaseStudyGridRow row;
        row.x = grid(i, 0);
        row.truth = case_value(row.x);
        row.mean = pred.mean(i);
        row.stddev = pred.stddev(i);
        row.ei = expected_improvement(row.mean, row.stddev, report.incumbent);
        if (i == 0 || row.ei > report.max_ei) {
            report.max_ei = row.ei;
            report.argmax_ei = row.x;
        }
        report.grid.push_back(row);
    }

    RngStream cloud_rng = rng.child("offspring");
    const Population cloud =
        eda_offspring(evaluated, params.offspring, EDAParams{}, bounds, cloud_rng);
    const Eigen::VectorXd cloud_pred = model.predict(cloud.as_matrix());
    const Selection sel = select_by_prediction(cloud, cloud_pred, params.offspring / 2);
    std::vector<double> values(cloud_pred.data(), cloud_pred.data() + cloud_pred.size());
    const auto order = best_indices(values, values.size());
    report.offspring.resize(cloud.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        auto& o = report.offspring[order[r]];
        o.x = cloud[order[r]].x()(0);
        o.truth = case_value(o.x);
        o.predicted = values[order[r]];
        o.rank = r + 1;
    }
    for (std::size_t i : sel.unevaluated_indices)
        report.offspring[i].unevaluated = true;
    return report;
}

} // namespace usea
