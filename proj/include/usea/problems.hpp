#pragma once

#include "usea/core.hpp"
#include "usea/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace usea {

// Benchmark kernels. All take an Eigen vector expression and are written
// for minimization.
namespace functions {

template <typename Derived>
typename Derived::Scalar ellipsoid(const Eigen::MatrixBase<Derived>& x)
{
    using S = typename Derived::Scalar;
    const auto n = x.size();
    const auto w = Eigen::Array<S, Eigen::Dynamic, 1>::LinSpaced(n, S(1), S(n));
    return (w * x.array().square()).sum();
}

template <typename Derived>
typename Derived::Scalar sphere(const Eigen::MatrixBase<Derived>& x)
{
    return x.squaredNorm();
}

template <typename Derived>
typename Derived::Scalar rosenbrock(const Eigen::MatrixBase<Derived>& x)
{
    using S = typename Derived::Scalar;
    const auto n = x.size();
    if (n < 2)
        return (S(1) - x(0)) * (S(1) - x(0));
    const auto head = x.head(n - 1).array();
    const auto tail = x.tail(n - 1).array();
    return (S(100) * (tail - head.square()).square() + (S(1) - head).square()).sum();
}

template <typename Derived>
typename Derived::Scalar ackley(const Eigen::MatrixBase<Derived>& x)
{
    using S = typename Derived::Scalar;
    using std::cos;
    using std::exp;
    using std::sqrt;
    const S n = S(x.size());
    const S sq = x.squaredNorm() / n;
    const S cs = (S(2) * std::numbers::pi_v<S> * x.array()).cos().sum() / n;
    return S(-20) * exp(S(-0.2) * sqrt(sq)) - exp(cs) + S(20) + std::numbers::e_v<S>;
}

template <typename Derived>
typename Derived::Scalar griewank(const Eigen::MatrixBase<Derived>& x)
{
    using S = typename Derived::Scalar;
    const auto n = x.size();
    const auto idx = Eigen::Array<S, Eigen::Dynamic, 1>::LinSpaced(n, S(1), S(n));
    const S prod = (x.array() / idx.sqrt()).cos().prod();
    return x.squaredNorm() / S(4000) - prod + S(1);
}

template <typename Derived>
typename Derived::Scalar schwefel_2_22(const Eigen::MatrixBase<Derived>& x)
{
    const auto a = x.array().abs();
    return a.sum() + a.prod();
}

template <typename Derived>
typename Derived::Scalar schwefel_1_2(const Eigen::MatrixBase<Derived>& x)
{
    using S = typename Derived::Scalar;
    S total = 0, running = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        running += x(i);
        total += running * running;
    }
    return total;
}

template <typename Derived>
typename Derived::Scalar schwefel_2_21(const Eigen::MatrixBase<Derived>& x)
{
    return x.array().abs().maxCoeff();
}

template <typename Derived>
typename Derived::Scalar step(const Eigen::MatrixBase<Derived>& x)
{
    using S = typename Derived::Scalar;
    return (x.array() + S(0.5)).floor().square().sum();
}

// Noise-free part of the quartic function.
template <typename Derived>
typename Derived::Scalar quartic(const Eigen::MatrixBase<Derived>& x)
{
    using S = typename Derived::Scalar;
    const auto n = x.size();
    const auto w = Eigen::Array<S, Eigen::Dynamic, 1>::LinSpaced(n, S(1), S(n));
    return (w * x.array().square().square()).sum();
}

template <typename Derived>
typename Derived::Scalar schwefel_2_26(const Eigen::MatrixBase<Derived>& x)
{
    return -(x.array() * x.array().abs().sqrt().sin()).sum();
}

template <typename Derived>
typename Derived::Scalar rastrigin(const Eigen::MatrixBase<Derived>& x)
{
    using S = typename Derived::Scalar;
    const auto a = x.array();
    return (a.square() - S(10) * (S(2) * std::numbers::pi_v<S> * a).cos() + S(10)).sum();
}

template <typename S>
S penalty_u(S xi, S a, S k, S m)
{
    using std::pow;
    if (xi > a)
        return k * pow(xi - a, m);
    if (xi < -a)
        return k * pow(-xi - a, m);
    return S(0);
}

template <typename Derived>
typename Derived::Scalar penalized_1(const Eigen::MatrixBase<Derived>& x)
{
    using S = typename Derived::Scalar;
    using std::sin;
    const auto n = x.size();
    const S pi = std::numbers::pi_v<S>;
    const Eigen::Array<S, Eigen::Dynamic, 1> y = S(1) + (x.array() + S(1)) / S(4);
    S s = S(10) * sin(pi * y(0)) * sin(pi * y(0));
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const S sn = sin(pi * y(i + 1));
        s += (y(i) - S(1)) * (y(i) - S(1)) * (S(1) + S(10) * sn * sn);
    }
    s += (y(n - 1) - S(1)) * (y(n - 1) - S(1));
    S pen = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        pen += penalty_u<S>(x(i), S(10), S(100), S(4));
    return pi / S(n) * s + pen;
}

template <typename Derived>
typename Derived::Scalar penalized_2(const Eigen::MatrixBase<Derived>& x)
{
    using S = typename Derived::Scalar;
    using std::sin;
    const auto n = x.size();
    const S pi = std::numbers::pi_v<S>;
    const S s0 = sin(S(3) * pi * x(0));
    S s = s0 * s0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const S sn = sin(S(3) * pi * x(i + 1));
        s += (x(i) - S(1)) * (x(i) - S(1)) * (S(1) + sn * sn);
    }
    const S sl = sin(S(2) * pi * x(n - 1));
    s += (x(n - 1) - S(1)) * (x(n - 1) - S(1)) * (S(1) + sl * sl);
    S pen = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        pen += penalty_u<S>(x(i), S(5), S(100), S(4));
    return S(0.1) * s + pen;
}

// -x sin(x): the 1-D case-study function oriented for minimization.
template <typename S>
S neg_x_sin_x(S x)
{
    using std::sin;
    return -x * sin(x);
}

} // namespace functions

enum class ProblemId {
    Ellipsoid,
    Rosenbrock,
    Ackley,
    Griewank,
    YLLF01,
    YLLF02,
    YLLF03,
    YLLF04,
    YLLF05,
    YLLF06,
    YLLF07,
    YLLF08,
    YLLF09,
    YLLF12,
    YLLF13,
    CaseStudy1D,
};

enum class BoundsCheck { Strict, Lenient };

class Problem {
public:
    Problem(ProblemId id, std::string name, Bounds bounds, std::optional<double> optimum_value,
            std::optional<DecisionVector> optimizer, bool stochastic);

    ProblemId id() const { return id_; }
    const std::string& name() const { return name_; }
    Eigen::Index dim() const { return bounds_.dim(); }
    const Bounds& bounds() const { return bounds_; }
    const std::optional<double>& known_optimum_value() const { return optimum_value_; }
    const std::optional<DecisionVector>& known_optimizer() const { return optimizer_; }
    bool stochastic() const { return stochastic_; }

    // rng is consumed only by stochastic problems.
    double evaluate(const DecisionVector& x, RngStream& rng,
                    BoundsCheck check = BoundsCheck::Strict) const;

    // Deterministic problems only.
    double evaluate(const DecisionVector& x, BoundsCheck check = BoundsCheck::Strict) const;

private:
    double raw(const DecisionVector& x) const;

    ProblemId id_;
    std::string name_;
    Bounds bounds_;
    std::optional<double> optimum_value_;
    std::optional<DecisionVector> optimizer_;
    bool stochastic_;
};

// Builds a configured problem from its CLI name. CaseStudy1D is always
// one-dimensional; YLLF10 and YLLF11 are rejected.
Problem problem_registry(const std::string& name, Eigen::Index n);

// Every name accepted by problem_registry.
const std::vector<std::string>& problem_names();

const std::vector<std::string>& lzg_suite();
const std::vector<std::string>& yll_suite();

inline constexpr double kCaseStudyOptimizer = 7.978665712413240755;
inline constexpr double kCaseStudyOptimum = -7.916727371587781850;

} // namespace usea
