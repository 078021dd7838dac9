#include "usea/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace usea {

void EDAParams::validate() const
{
    if (K < 3)
        throw std::invalid_argument("EDA: K must be at least 3");
}

namespace {

// Half-width of the interior span used when a dimension has collapsed to a
// single value.
double degenerate_half_width(double lb, double ub)
{
    return std::max(1e-8 * (ub - lb), 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(ub)));
}

} // namespace

VWHModel vwh_build(const Population& pop, std::size_t K, const Bounds& bounds)
{
    EDAParams{K}.validate();
    if (pop.size() < 2)
        throw std::invalid_argument("vwh_build: population needs at least two members");
    const Eigen::Index n = bounds.dim();
    const auto k = static_cast<Eigen::Index>(K);
    const Eigen::MatrixXd data = pop.as_matrix();
    if (data.cols() != n)
        throw std::invalid_argument("vwh_build: dimension mismatch");

    VWHModel model;
    model.edges.resize(n, k + 1);
    model.probs.resize(n, k);
    std::vector<double> column(static_cast<std::size_t>(data.rows()));

    for (Eigen::Index i = 0; i < n; ++i) {
        const double lb = bounds.lower()(i);
        const double ub = bounds.upper()(i);
        for (Eigen::Index r = 0; r < data.rows(); ++r)
            column[static_cast<std::size_t>(r)] = data(r, i);
        std::sort(column.begin(), column.end());
        const double min1 = column[0], min2 = column[1];
        const double max1 = column[column.size() - 1], max2 = column[column.size() - 2];

        double lo = std::max(min1 - 0.5 * (min2 - min1), lb);
        double hi = std::min(max1 + 0.5 * (max1 - max2), ub);
        if (!(hi > lo)) {
            const double h = degenerate_half_width(lb, ub);
            lo = std::max(min1 - h, lb);
            hi = std::min(min1 + h, ub);
        }

        auto edges = model.edges.row(i);
        edges(0) = lb;
        edges(k) = ub;
        const double width = (hi - lo) / static_cast<double>(k - 2);
        for (Eigen::Index e = 1; e < k - 1; ++e)
            edges(e) = lo + static_cast<double>(e - 1) * width;
        edges(k - 1) = hi;

        Eigen::VectorXd weight = Eigen::VectorXd::Zero(k);
        // Interior bins [edges(1), edges(2)), ..., [edges(k-2), edges(k-1)].
        for (double v : column) {
            Eigen::Index bin = 1;
            while (bin < k - 2 && v >= edges(bin + 1))
                ++bin;
            weight(bin) += 1.0;
        }
        weight(0) = edges(1) > edges(0) ? kVwhBoundaryWeight : 0.0;
        weight(k - 1) = edges(k) > edges(k - 1) ? kVwhBoundaryWeight : 0.0;
        model.probs.row(i) = (weight / weight.sum()).transpose();
    }
    return model;
}

Population vwh_sample(const VWHModel& model, std::size_t n, RngStream& rng)
{
    const Eigen::Index dim = model.dim();
    const Eigen::Index k = model.bins();
    Population out(Role::Offspring);
    out.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        DecisionVector x(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double u = rng.uniform();
            Eigen::Index bin = -1;
            double cum = 0.0;
            for (Eigen::Index b = 0; b < k; ++b) {
                if (model.probs(i, b) <= 0.0)
                    continue;
                cum += model.probs(i, b);
                bin = b;
                if (u < cum)
                    break;
            }
            const double a = model.edges(i, bin);
            const double w = model.edges(i, bin + 1) - a;
            x(i) = std::min(a + rng.uniform() * w, model.edges(i, k));
        }
        out.push_back(Individual(std::move(x)));
    }
    return out;
}

Population eda_offspring(const Population& evaluated, std::size_t n, const EDAParams& params,
                         const Bounds& bounds, RngStream& rng)
{
    return vwh_sample(vwh_build(evaluated, params.K, bounds), n, rng);
}

Population eda_reproduce(const Population& evaluated, const Population& unevaluated, std::size_t n,
                         const EDAParams& params, const Bounds& bounds, RngStream& rng)
{
    if (unevaluated.empty())
        return eda_offspring(evaluated, n, params, bounds, rng);
    Population merged(Role::Offspring);
    merged.reserve(evaluated.size() + unevaluated.size());
    for (const auto& m : evaluated)
        merged.push_back(Individual(m.x()));
    for (const auto& m : unevaluated)
        merged.push_back(Individual(m.x()));
    return vwh_sample(vwh_build(merged, params.K, bounds), n, rng);
}

std::string to_string(OperatorKind kind)
{
    switch (kind) {
    case OperatorKind::GA: return "ga";
    case OperatorKind::DE: return "de";
    case OperatorKind::EDA: return "eda";
    }
    throw std::logic_error("to_string: unhandled operator");
}

OperatorKind parse_operator(const std::string& name)
{
    if (name == "ga" || name == "GA")
        return OperatorKind::GA;
    if (name == "de" || name == "DE")
        return OperatorKind::DE;
    if (name == "eda" || name == "EDA")
        return OperatorKind::EDA;
    throw std::invalid_argument("unknown operator: " + name);
}

Population reproduce(const OperatorConfig& op, const Population& evaluated,
                     const Population& unevaluated, std::size_t n, const Bounds& bounds,
                     RngStream& rng)
{
    switch (op.kind) {
    case OperatorKind::GA: return ga_reproduce(evaluated, unevaluated, n, op.ga, bounds, rng);
    case OperatorKind::DE: return de_reproduce(evaluated, unevaluated, n, op.de, op.ga, bounds, rng);
    case OperatorKind::EDA: return eda_reproduce(evaluated, unevaluated, n, op.eda, bounds, rng);
    }
    throw std::logic_error("reproduce: unhandled operator");
}

} // namespace usea
