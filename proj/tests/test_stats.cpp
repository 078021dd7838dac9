#include <doctest.h>

#include "usea/rng.hpp"
#include "usea/stats.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace usea;
using namespace usea::oracle;

namespace {

constexpr int kProblems = 15, kAlgorithms = 9;

// Means of nine algorithms on fifteen problems at n = 20, with the mean-rank
// row that goes with them.
constexpr double kPublishedMeans[kProblems][kAlgorithms] = {
    {9.68e+00, 7.32e+01, 9.49e+01, 1.41e-01, 6.58e-02, 1.55e-01, 7.17e+01, 1.87e+01, 1.30e+02},
    {1.04e+02, 1.64e+02, 3.03e+02, 2.18e+01, 5.42e+01, 1.25e+02, 2.37e+02, 3.57e+01, 3.22e+02},
    {7.30e+00, 1.46e+01, 1.78e+01, 9.10e-01, 7.12e+00, 5.19e+00, 1.33e+01, 1.83e+01, 1.48e+01},
    {4.88e+00, 1.88e+01, 3.12e+01, 7.82e-01, 1.02e+00, 1.43e+00, 2.96e+01, 2.06e+01, 5.46e+01},
    {3.60e+02, 2.26e+03, 3.11e+03, 5.30e+00, 3.66e+00, 1.01e+01, 3.17e+03, 6.73e+02, 5.37e+03},
    {3.32e+00, 8.06e+00, 2.22e+01, 2.04e+01, 4.62e+05, 3.89e+04, 2.67e+01, 3.27e+01, 2.41e+01},
    {8.49e+03, 6.37e+03, 1.67e+04, 1.68e+04, 7.47e+03, 3.50e+04, 2.32e+04, 1.71e+04, 1.26e+04},
    {3.85e+01, 3.88e+01, 6.44e+01, 2.14e+01, 2.78e+01, 2.82e+01, 3.28e+01, 7.06e+01, 4.17e+01},
    {7.95e+04, 3.74e+05, 4.43e+06, 3.90e+02, 1.77e+05, 2.34e+06, 1.13e+06, 1.12e+05, 4.71e+06},
    {4.78e+02, 2.06e+03, 4.12e+03, 6.97e+00, 5.30e+00, 9.80e+00, 3.20e+03, 8.59e+02, 6.26e+03},
    {3.07e-01, 1.99e+00, 1.33e+00, 9.19e-02, 2.67e-01, 1.05e+00, 6.67e-01, 3.23e-01, 2.09e+00},
    {2.21e+03, 2.39e+03, 3.02e+03, 1.86e+03, 5.17e+03, 5.54e+03, 4.66e+03, 5.67e+03, 5.52e+03},
    {1.26e+02, 1.03e+02, 1.29e+02, 8.66e+01, 1.63e+02, 1.65e+02, 1.57e+02, 1.16e+02, 1.02e+02},
    {3.28e+03, 1.39e+05, 4.06e+06, 2.47e+00, 6.68e+04, 8.77e+06, 6.09e+04, 1.23e+02, 2.46e+06},
    {1.95e+10, 1.58e+11, 5.01e+11, 3.17e+04, 2.72e+10, 8.77e+11, 1.10e+06, 6.82e+04, 1.08e+07},
};
constexpr double kPublishedMeanRank[kAlgorithms] = {3.53, 5.13, 7.00, 1.67, 3.67, 5.8, 5.87, 5.27, 7.07};

} // namespace

TEST_CASE("separated samples of five match exhaustive enumeration")
{
    const std::vector<double> a{1, 2, 3, 4, 5}, b{10, 11, 12, 13, 14};
    const double oracle = enumerate_p(a, b);
    CHECK(oracle == doctest::Approx(2.0 / 252.0));
    const WilcoxonResult w = wilcoxon_rank_sum(a, b);
    CHECK(w.exact);
    CHECK(std::abs(w.p - oracle) < 1e-12);
    CHECK(w.mark == Mark::Better);
    CHECK(w.u == 0.0);
    CHECK(wilcoxon_rank_sum(b, a).mark == Mark::Worse);
}

TEST_CASE("exact p agrees with enumeration on random tie-free samples")
{
    RngStream rng(4);
    for (int t = 0; t < 60; ++t) {
        const std::size_t m = 2 + rng.uniform_index(6), n = 2 + rng.uniform_index(6);
        std::vector<double> a(m), b(n);
        const double shift = rng.uniform(-1.0, 1.0);
        for (auto& v : a)
            v = rng.normal();
        for (auto& v : b)
            v = rng.normal() + shift;
        CAPTURE(m);
        CAPTURE(n);
        CHECK(wilcoxon_rank_sum(a, b).p == doctest::Approx(enumerate_p(a, b)).epsilon(1e-10));
    }
}

TEST_CASE("normal approximation with ties and for large samples")
{
    // reference values from an independent statistics package
    const std::vector<double> a{1, 2, 2, 3, 3, 3, 4, 5, 6, 7}, b{3, 4, 4, 5, 6, 6, 8, 9, 9, 10, 11};
    const WilcoxonResult w = wilcoxon_rank_sum(a, b);
    CHECK_FALSE(w.exact);
    CHECK(w.p == doctest::Approx(0.009654666141172184).epsilon(1e-9));

    std::vector<double> big_a(60), big_b(60);
    for (int i = 0; i < 60; ++i) {
        big_a[static_cast<std::size_t>(i)] = i;
        big_b[static_cast<std::size_t>(i)] = i + 15.5;
    }
    const WilcoxonResult big = wilcoxon_rank_sum(big_a, big_b);
    CHECK_FALSE(big.exact);
    CHECK(big.p == doctest::Approx(2.149444765493723e-05).epsilon(1e-9));
}

TEST_CASE("wilcoxon properties")
{
    RngStream rng(8);
    for (int t = 0; t < 100; ++t) {
        const std::size_t m = 2 + rng.uniform_index(40), n = 2 + rng.uniform_index(40);
        std::vector<double> a(m), b(n);
        for (auto& v : a)
            v = rng.normal();
        for (auto& v : b)
            v = rng.normal() + 0.5;
        const WilcoxonResult ab = wilcoxon_rank_sum(a, b), ba = wilcoxon_rank_sum(b, a);
        CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-12));
        CHECK(ab.p > 0.0);
        CHECK(ab.p <= 1.0);
        if (ab.mark == Mark::Better)
            CHECK(ba.mark == Mark::Worse);
        if (ab.mark == Mark::Similar)
            CHECK(ba.mark == Mark::Similar);
        CHECK(ab.u + ba.u == doctest::Approx(static_cast<double>(m * n)));

        // strictly increasing transforms leave the test unchanged
        std::vector<double> ea(a), eb(b);
        for (auto& v : ea)
            v = std::exp(v) * 3.0 - 1.0;
        for (auto& v : eb)
            v = std::exp(v) * 3.0 - 1.0;
        const WilcoxonResult tr = wilcoxon_rank_sum(ea, eb);
        CHECK(tr.p == doctest::Approx(ab.p).epsilon(1e-12));
        CHECK(tr.mark == ab.mark);
    }
    const std::vector<double> same{1, 2, 3, 4, 5, 6};
    CHECK(wilcoxon_rank_sum(same, same).mark == Mark::Similar);
    CHECK(wilcoxon_rank_sum(same, same).p == doctest::Approx(1.0));
    const std::vector<double> flat(10, 2.0);
    CHECK(wilcoxon_rank_sum(flat, flat).p == 1.0);
    CHECK_THROWS(wilcoxon_rank_sum(std::vector<double>{1.0}, same));
}

TEST_CASE("midranks")
{
    const std::vector<double> v{3.0, 1.0, 3.0, 2.0, 3.0};
    const Eigen::VectorXd r = midranks(v);
    CHECK(r(0) == 4.0);
    CHECK(r(1) == 1.0);
    CHECK(r(2) == 4.0);
    CHECK(r(3) == 2.0);
    CHECK(r(4) == 4.0);
}

TEST_CASE("mean rank reproduces a known benchmark table")
{
    Eigen::MatrixXd means(kProblems, kAlgorithms);
    for (int i = 0; i < kProblems; ++i)
        for (int j = 0; j < kAlgorithms; ++j)
            means(i, j) = kPublishedMeans[i][j];
    const Eigen::VectorXd mr = mean_rank(means);
    for (int j = 0; j < kAlgorithms; ++j) {
        CAPTURE(j);
        CHECK(std::abs(mr(j) - kPublishedMeanRank[j]) < 0.006);
    }
    CHECK(mr(0) == doctest::Approx(53.0 / 15.0));
}

TEST_CASE("mean rank properties")
{
    RngStream rng(2);
    for (int t = 0; t < 50; ++t) {
        const auto rows = static_cast<Eigen::Index>(1 + rng.uniform_index(10));
        const auto k = static_cast<Eigen::Index>(2 + rng.uniform_index(8));
        Eigen::MatrixXd m(rows, k);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < k; ++j)
                m(i, j) = static_cast<double>(rng.uniform_index(4)); // plenty of ties
        const Eigen::VectorXd mr = mean_rank(m);
        CHECK(mr.mean() == doctest::Approx((static_cast<double>(k) + 1.0) / 2.0));
        CHECK((mr.array() >= 1.0).all());
        CHECK((mr.array() <= static_cast<double>(k)).all());
    }
    const std::vector<double> row{2.0, 1.0, 2.0, 0.5};
    const Eigen::VectorXd rr = row_ranks(row);
    CHECK(rr(0) == 3.5);
    CHECK(rr(1) == 2.0);
    CHECK(rr(3) == 1.0);
    CHECK_THROWS(mean_rank(Eigen::MatrixXd(0, 3)));
    Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(2, 2);
    bad(1, 1) = std::nan("");
    CHECK_THROWS(mean_rank(bad));
}

TEST_CASE("improvement metric and descriptive statistics")
{
    CHECK(improvement_metric(100.0, 80.0) == doctest::Approx(20.0));
    CHECK(improvement_metric(50.0, 75.0) == doctest::Approx(-50.0));
    CHECK(improvement_metric(10.0, 10.0) == 0.0);
    CHECK(improvement_metric(-4.0, -2.0) == doctest::Approx(50.0));
    CHECK_THROWS(improvement_metric(0.0, 1.0));

    const std::vector<double> v{4.0, 1.0, 3.0, 2.0};
    CHECK(mean(v) == 2.5);
    CHECK(median(v) == 2.5);
    CHECK(median(std::vector<double>{5.0, 1.0, 3.0}) == 3.0);
    CHECK(sample_stddev(v) == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(sample_stddev(std::vector<double>{7.0}) == 0.0);

    for (Mark m : {Mark::Better, Mark::Worse, Mark::Similar})
        CHECK(parse_mark(to_string(m)) == m);
    CHECK(parse_mark("~") == Mark::Similar);
}
