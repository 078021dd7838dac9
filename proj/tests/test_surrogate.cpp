#include <doctest.h>

#include "usea/gaussian_process.hpp"
#include "usea/random_forest.hpp"
#include "usea/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace usea;

namespace {

Population offspring_from(const Eigen::MatrixXd& X)
{
    Population p(Role::Offspring);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        p.push_back(Individual(X.row(i).transpose()));
    return p;
}

} // namespace

TEST_CASE("single unbootstrapped tree recalls its training data")
{
    Eigen::MatrixXd X(3, 2);
    X << 0.0, 1.0, 1.0, 0.0, 2.0, 2.0;
    Eigen::VectorXd y(3);
    y << 3.0, -1.0, 7.5;
    RandomForestParams p;
    p.n_trees = 1;
    p.bootstrap = false;
    p.min_samples_leaf = 1;
    RngStream rng(1);
    const auto m = RandomForestModel::fit(X, y, p, rng);
    const Prediction pred = m.predict_with_uncertainty(X);
    for (int i = 0; i < 3; ++i) {
        CHECK(pred.mean(i) == y(i));
        CHECK(pred.stddev(i) == 0.0);
    }
}

TEST_CASE("forest basics")
{
    RngStream gen(3);
    Eigen::MatrixXd X(60, 3);
    Eigen::VectorXd y(60);
    for (int i = 0; i < 60; ++i) {
        for (int j = 0; j < 3; ++j)
            X(i, j) = gen.uniform(-1.0, 1.0);
        y(i) = X.row(i).squaredNorm();
    }
    RngStream r1(9), r2(9);
    const auto a = RandomForestModel::fit(X, y, {}, r1);
    const auto b = RandomForestModel::fit(X, y, {}, r2);
    CHECK(a.predict(X) == b.predict(X));
    CHECK(a.trees().size() == 100);
    const Prediction p = a.predict_with_uncertainty(X);
    CHECK((p.stddev.array() >= 0.0).all());
    CHECK(p.mean.isApprox(a.predict(X)));
    // mean is the average of tree outputs
    double manual = 0.0;
    for (const auto& t : a.trees())
        manual += t.predict(X.row(0).transpose());
    CHECK(manual / 100.0 == doctest::Approx(p.mean(0)));

    RandomForestParams shallow;
    shallow.max_depth = 2;
    RngStream r3(1);
    const auto s = RandomForestModel::fit(X, y, shallow, r3);
    for (const auto& t : s.trees())
        CHECK(t.depth() <= 2);

    CHECK(RandomForestParams{}.mtry(20) == 6);
    CHECK(RandomForestParams{}.mtry(2) == 1);
    CHECK_THROWS_AS(RandomForestModel{}.predict(X), std::logic_error);
    CHECK_THROWS(a.predict(Eigen::MatrixXd::Zero(2, 5)));
}

TEST_CASE("forest error shrinks as trees are added")
{
    // noisy quadratic, test error averaged over 20 seeds
    double err_small = 0.0, err_large = 0.0;
    for (int seed = 0; seed < 20; ++seed) {
        RngStream gen(static_cast<std::uint64_t>(100 + seed));
        Eigen::MatrixXd X(80, 2), T(200, 2);
        Eigen::VectorXd y(80), truth(200);
        for (int i = 0; i < 80; ++i) {
            X(i, 0) = gen.uniform(-2.0, 2.0);
            X(i, 1) = gen.uniform(-2.0, 2.0);
            y(i) = X.row(i).squaredNorm() + gen.normal(0.0, 0.5);
        }
        for (int i = 0; i < 200; ++i) {
            T(i, 0) = gen.uniform(-2.0, 2.0);
            T(i, 1) = gen.uniform(-2.0, 2.0);
            truth(i) = T.row(i).squaredNorm();
        }
        RandomForestParams one, many;
        one.n_trees = 1;
        many.n_trees = 100;
        RngStream ra(static_cast<std::uint64_t>(seed)), rb(static_cast<std::uint64_t>(seed));
        err_small += (RandomForestModel::fit(X, y, one, ra).predict(T) - truth).squaredNorm();
        err_large += (RandomForestModel::fit(X, y, many, rb).predict(T) - truth).squaredNorm();
    }
    CHECK(err_large < err_small);
}

TEST_CASE("GP interpolates and reports low variance at training points")
{
    Eigen::MatrixXd X(6, 1);
    X << 0.0, 1.0, 2.0, 3.0, 4.0, 5.0;
    Eigen::VectorXd y = X.col(0).array().sin().matrix();
    const auto gp = GaussianProcessModel::fit(X, y);
    const Prediction p = gp.predict_with_uncertainty(X);
    for (int i = 0; i < 6; ++i) {
        CHECK(p.mean(i) == doctest::Approx(y(i)).epsilon(1e-3));
        CHECK(p.stddev(i) < 1e-2);
    }
    Eigen::MatrixXd far(1, 1);
    far << 2.5;
    CHECK(gp.predict_with_uncertainty(far).stddev(0) > p.stddev(2));
    CHECK(gp.lengthscale() >= 0.05);
    CHECK(gp.lengthscale() <= 2.0);
    CHECK(std::isfinite(gp.log_marginal_likelihood()));

    // constant targets do not break standardization
    const auto flat = GaussianProcessModel::fit(X, Eigen::VectorXd::Constant(6, 4.0));
    CHECK(flat.predict(X).isApprox(Eigen::VectorXd::Constant(6, 4.0)));

    // duplicated inputs with conflicting targets need jitter
    Eigen::MatrixXd D(4, 1);
    D << 1.0, 1.0, 2.0, 3.0;
    Eigen::VectorXd dy(4);
    dy << 0.0, 1.0, 2.0, 3.0;
    GaussianProcessParams exact;
    exact.noise = 0.0;
    CHECK_NOTHROW(GaussianProcessModel::fit(D, dy, exact));
    const Eigen::MatrixXd k = squared_exponential(Eigen::MatrixXd::Zero(1, 2), Eigen::MatrixXd::Ones(2, 2), 0.5);
    CHECK(k.rows() == 1);
    CHECK(k.cols() == 2);
    CHECK(k(0, 0) == doctest::Approx(std::exp(-2.0 / (2.0 * 0.25))));
}

TEST_CASE("expected improvement")
{
    CHECK(expected_improvement(0.0, 1.0, 0.0) == doctest::Approx(0.3989422804014327));
    CHECK(expected_improvement(5.0, 0.0, 3.0) == 0.0);
    CHECK(expected_improvement(1.0, 0.0, 3.0) == 2.0);
    CHECK(expected_improvement(-10.0, 1.0, 0.0) == doctest::Approx(10.0).epsilon(1e-6));
    CHECK_THROWS(expected_improvement(0.0, -1.0, 0.0));
    RngStream rng(2);
    for (int i = 0; i < 1000; ++i)
        CHECK(expected_improvement(rng.normal(), std::abs(rng.normal()), rng.normal()) >= 0.0);
}

TEST_CASE("training data selection")
{
    Archive a(Bounds::uniform(1, 0.0, 10.0));
    const std::vector<double> ys{5.0, 1.0, 4.0, 2.0, 3.0};
    for (std::size_t i = 0; i < ys.size(); ++i)
        a = archive_insert(std::move(a), DecisionVector::Constant(1, static_cast<double>(i)), ys[i]);
    const TrainingSet ts = select_training_data(a, 3);
    CHECK(ts.tau == 3);
    // best three, archive order kept
    CHECK(ts.targets(0) == 1.0);
    CHECK(ts.targets(1) == 2.0);
    CHECK(ts.targets(2) == 3.0);
    CHECK(ts.inputs(0, 0) == 1.0);
    CHECK(select_training_data(a, 50).size() == 5);
    CHECK_THROWS(select_training_data(a, 0));
}

TEST_CASE("model-assisted selection is rank based")
{
    RngStream rng(6);
    for (int t = 0; t < 200; ++t) {
        const std::size_t N = 2 * (1 + rng.uniform_index(30));
        Eigen::MatrixXd X(static_cast<Eigen::Index>(N), 2);
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            X.row(i) << rng.uniform(), rng.uniform();
        const Population off = offspring_from(X);
        Eigen::VectorXd pred(static_cast<Eigen::Index>(N));
        for (auto& v : pred)
            v = rng.normal();
        const Selection s1 = select_by_prediction(off, pred);
        const Eigen::VectorXd moved = (pred.array() * 3.0).exp().matrix();
        const Selection s2 = select_by_prediction(off, moved);
        CHECK(s1.best_index == s2.best_index);
        CHECK(s1.unevaluated_indices == s2.unevaluated_indices);
        CHECK(s1.unevaluated.size() == std::min(N / 2, N - 1));
        CHECK(s1.unevaluated.role() == Role::Unevaluated);
        CHECK(s1.best.value() == pred.minCoeff());
        std::set<std::size_t> seen(s1.unevaluated_indices.begin(), s1.unevaluated_indices.end());
        CHECK(seen.count(s1.best_index) == 0);
        for (std::size_t i : s1.unevaluated_indices)
            CHECK(pred(static_cast<Eigen::Index>(i)) >= pred(static_cast<Eigen::Index>(s1.best_index)));
    }
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(4, 1);
    X.col(0) << 0.0, 1.0, 2.0, 3.0;
    Eigen::VectorXd tied = Eigen::VectorXd::Constant(4, 1.0);
    CHECK(select_by_prediction(offspring_from(X), tied).best_index == 0);
    CHECK_THROWS(select_by_prediction(offspring_from(X), Eigen::VectorXd::Zero(3)));
}

TEST_CASE("surrogate dispatch")
{
    Archive a(Bounds::uniform(2, -1.0, 1.0));
    RngStream gen(12);
    for (int i = 0; i < 20; ++i) {
        DecisionVector x(2);
        x << gen.uniform(-1.0, 1.0), gen.uniform(-1.0, 1.0);
        a = archive_insert(std::move(a), x, x.squaredNorm());
    }
    const TrainingSet ts = select_training_data(a, 20);
    for (auto kind : {SurrogateKind::RF, SurrogateKind::GP}) {
        SurrogateConfig c;
        c.kind = kind;
        RngStream rng(1);
        const SurrogateModel m = fit(c, ts, rng);
        const Eigen::VectorXd p = predict(m, ts.inputs);
        CHECK(p.size() == 20);
        CHECK(all_finite(p));
        CHECK(parse_surrogate(to_string(kind)) == kind);
    }
}
