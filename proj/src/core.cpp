#include "usea/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace usea {

Bounds::Bounds(DecisionVector lower, DecisionVector upper)
    : lower_(std::move(lower)), upper_(std::move(upper))
{
    if (lower_.size() != upper_.size())
        throw std::invalid_argument("Bounds: lower/upper length mismatch");
    if (lower_.size() == 0)
        throw std::invalid_argument("Bounds: zero dimension");
    if (!all_finite(lower_) || !all_finite(upper_))
        throw std::invalid_argument("Bounds: non-finite bound");
    if (!(lower_.array() < upper_.array()).all())
        throw std::invalid_argument("Bounds: lower must be strictly below upper");
}

Bounds Bounds::uniform(Eigen::Index n, double lo, double hi)
{
    return Bounds(DecisionVector::Constant(n, lo), DecisionVector::Constant(n, hi));
}

Individual::Individual(DecisionVector x, Fitness fitness) : x_(std::move(x)), fitness_(fitness)
{
    if (!all_finite(x_))
        throw std::invalid_argument("Individual: non-finite decision vector");
}

double Individual::value() const
{
    if (const auto* e = std::get_if<Evaluated>(&fitness_))
        return e->value;
    if (const auto* p = std::get_if<Predicted>(&fitness_))
        return p->value;
    throw std::logic_error("Individual: no fitness attached");
}

void Individual::set_fitness(Fitness f)
{
    if (is_evaluated())
        throw std::logic_error("Individual: evaluated fitness is immutable");
    fitness_ = f;
}

Population::Population(Role role, std::vector<Individual> members) : role_(role)
{
    for (const auto& m : members)
        check(m);
    members_ = std::move(members);
}

void Population::check(const Individual& ind) const
{
    if (role_ == Role::Evaluated && !ind.is_evaluated())
        throw std::invalid_argument("Population: evaluated population requires evaluated members");
    if (role_ == Role::Unevaluated && !ind.is_predicted())
        throw std::invalid_argument("Population: unevaluated population requires predicted members");
    if (!members_.empty() && ind.x().size() != members_.front().x().size())
        throw std::invalid_argument("Population: dimension mismatch");
}

void Population::push_back(Individual ind)
{
    check(ind);
    members_.push_back(std::move(ind));
}

Eigen::MatrixXd Population::as_matrix() const
{
    if (members_.empty())
        return {};
    Eigen::MatrixXd m(static_cast<Eigen::Index>(members_.size()), members_.front().x().size());
    for (std::size_t i = 0; i < members_.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = members_[i].x().transpose();
    return m;
}

double Archive::best_value() const { return best().y; }

const ArchiveRecord& Archive::best() const
{
    if (records_.empty())
        throw std::logic_error("Archive: empty");
    // min_element returns the first minimum, i.e. the earliest evaluation.
    return *std::min_element(records_.begin(), records_.end(),
                             [](const auto& a, const auto& b) { return a.y < b.y; });
}

Archive archive_insert(Archive archive, DecisionVector x, double y)
{
    if (!std::isfinite(y))
        throw EvaluationFault("non-finite objective");
    if (x.size() != archive.bounds_.dim())
        throw std::invalid_argument("archive_insert: dimension mismatch");
    if (!all_finite(x))
        throw std::invalid_argument("archive_insert: non-finite decision vector");
    if (!archive.bounds_.contains(x))
        throw std::invalid_argument("archive_insert: point outside bounds");
    archive.records_.push_back({std::move(x), y});
    return archive;
}

std::vector<std::size_t> best_indices(const std::vector<double>& values, std::size_t n)
{
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    idx.resize(std::min(n, idx.size()));
    return idx;
}

Population population_update(const Archive& archive, std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("population_update: N must be positive");
    if (archive.empty())
        throw std::invalid_argument("population_update: empty archive");
    std::vector<double> ys;
    ys.reserve(archive.size());
    for (const auto& r : archive.records())
        ys.push_back(r.y);
    Population pop(Role::Evaluated);
    pop.reserve(std::min(n, ys.size()));
    for (std::size_t i : best_indices(ys, n))
        pop.push_back(Individual(archive.records()[i].x, Evaluated{archive.records()[i].y}));
    return pop;
}

} // namespace usea
