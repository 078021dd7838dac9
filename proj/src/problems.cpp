#include "usea/problems.hpp"

#include <map>
#include <stdexcept>

namespace usea {

namespace {

constexpr double kSchwefelOptimizer = 420.96874635998202731;
constexpr double kSchwefelOptimumPerDim = -418.98288727243370627;

struct Definition {
    ProblemId id;
    double lo;
    double hi;
    std::optional<double> optimizer_coord; // every coordinate equal
    bool stochastic = false;
};

const std::map<std::string, Definition>& definitions()
{
    static const std::map<std::string, Definition> defs = {
        {"Ellipsoid", {ProblemId::Ellipsoid, -5.12, 5.12, 0.0}},
        {"Rosenbrock", {ProblemId::Rosenbrock, -2.048, 2.048, 1.0}},
        {"Ackley", {ProblemId::Ackley, -32.768, 32.768, 0.0}},
        {"Griewank", {ProblemId::Griewank, -600.0, 600.0, 0.0}},
        {"YLLF01", {ProblemId::YLLF01, -100.0, 100.0, 0.0}},
        {"YLLF02", {ProblemId::YLLF02, -10.0, 10.0, 0.0}},
        {"YLLF03", {ProblemId::YLLF03, -100.0, 100.0, 0.0}},
        {"YLLF04", {ProblemId::YLLF04, -100.0, 100.0, 0.0}},
        {"YLLF05", {ProblemId::YLLF05, -30.0, 30.0, 1.0}},
        {"YLLF06", {ProblemId::YLLF06, -100.0, 100.0, 0.0}},
        {"YLLF07", {ProblemId::YLLF07, -1.28, 1.28, 0.0, true}},
        {"YLLF08", {ProblemId::YLLF08, -500.0, 500.0, kSchwefelOptimizer}},
        {"YLLF09", {ProblemId::YLLF09, -5.12, 5.12, 0.0}},
        {"YLLF12", {ProblemId::YLLF12, -50.0, 50.0, -1.0}},
        {"YLLF13", {ProblemId::YLLF13, -50.0, 50.0, 1.0}},
        {"CaseStudy1D", {ProblemId::CaseStudy1D, 0.0, 12.0, kCaseStudyOptimizer}},
    };
    return defs;
}

} // namespace

Problem::Problem(ProblemId id, std::string name, Bounds bounds, std::optional<double> optimum_value,
                 std::optional<DecisionVector> optimizer, bool stochastic)
    : id_(id), name_(std::move(name)), bounds_(std::move(bounds)), optimum_value_(optimum_value),
      optimizer_(std::move(optimizer)), stochastic_(stochastic)
{
}

double Problem::raw(const DecisionVector& x) const
{
    namespace f = functions;
    switch (id_) {
    case ProblemId::Ellipsoid: return f::ellipsoid(x);
    case ProblemId::Rosenbrock: return f::rosenbrock(x);
    case ProblemId::Ackley: return f::ackley(x);
    case ProblemId::Griewank: return f::griewank(x);
    case ProblemId::YLLF01: return f::sphere(x);
    case ProblemId::YLLF02: return f::schwefel_2_22(x);
    case ProblemId::YLLF03: return f::schwefel_1_2(x);
    case ProblemId::YLLF04: return f::schwefel_2_21(x);
    case ProblemId::YLLF05: return f::rosenbrock(x);
    case ProblemId::YLLF06: return f::step(x);
    case ProblemId::YLLF07: return f::quartic(x);
    case ProblemId::YLLF08: return f::schwefel_2_26(x);
    case ProblemId::YLLF09: return f::rastrigin(x);
    case ProblemId::YLLF12: return f::penalized_1(x);
    case ProblemId::YLLF13: return f::penalized_2(x);
    case ProblemId::CaseStudy1D: return f::neg_x_sin_x(x(0));
    }
    throw std::logic_error("Problem: unhandled id");
}

double Problem::evaluate(const DecisionVector& x, RngStream& rng, BoundsCheck check) const
{
    if (x.size() != dim())
        throw std::invalid_argument("evaluate: dimension mismatch for " + name_);
    if (check == BoundsCheck::Strict && !bounds_.contains(x))
        throw std::invalid_argument("evaluate: point outside bounds of " + name_);
    double y = raw(x);
    if (stochastic_)
        y += rng.uniform();
    return y;
}

double Problem::evaluate(const DecisionVector& x, BoundsCheck check) const
{
    if (stochastic_)
        throw std::logic_error("evaluate: " + name_ + " is stochastic and needs an RngStream");
    RngStream unused(0);
    return evaluate(x, unused, check);
}

Problem problem_registry(const std::string& name, Eigen::Index n)
{
    if (name == "YLLF10" || name == "YLLF11")
        throw std::invalid_argument(name + " is excluded by suite definition");
    const auto& defs = definitions();
    const auto it = defs.find(name);
    if (it == defs.end())
        throw std::invalid_argument("unknown problem: " + name);
    const Definition& d = it->second;
    if (d.id == ProblemId::CaseStudy1D)
        n = 1;
    if (n < 1)
        throw std::invalid_argument("problem dimension must be at least 1");

    Bounds bounds = Bounds::uniform(n, d.lo, d.hi);
    std::optional<DecisionVector> optimizer;
    std::optional<double> optimum;
    if (d.optimizer_coord) {
        optimizer = DecisionVector::Constant(n, *d.optimizer_coord);
        switch (d.id) {
        case ProblemId::YLLF08: optimum = kSchwefelOptimumPerDim * static_cast<double>(n); break;
        case ProblemId::CaseStudy1D: optimum = kCaseStudyOptimum; break;
        default: optimum = 0.0; break;
        }
    }
    return Problem(d.id, name, std::move(bounds), optimum, std::move(optimizer), d.stochastic);
}

const std::vector<std::string>& problem_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out = lzg_suite();
        for (const auto& s : yll_suite())
            out.push_back(s);
        out.push_back("CaseStudy1D");
        return out;
    }();
    return names;
}

const std::vector<std::string>& lzg_suite()
{
    static const std::vector<std::string> names = {"Ellipsoid", "Rosenbrock", "Ackley", "Griewank"};
    return names;
}

const std::vector<std::string>& yll_suite()
{
    static const std::vector<std::string> names = {"YLLF01", "YLLF02", "YLLF03", "YLLF04", "YLLF05",
                                                   "YLLF06", "YLLF07", "YLLF08", "YLLF09", "YLLF12",
                                                   "YLLF13"};
    return names;
}

} // namespace usea
