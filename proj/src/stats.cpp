#include "usea/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace usea {

std::string to_string(Mark m)
{
    switch (m) {
    case Mark::Better: return "+";
    case Mark::Worse: return "-";
    case Mark::Similar: return "≈";
    }
    throw std::logic_error("to_string: unhandled mark");
}

Mark parse_mark(const std::string& s)
{
    if (s == "+")
        return Mark::Better;
    if (s == "-")
        return Mark::Worse;
    if (s == "≈" || s == "~")
        return Mark::Similar;
    throw std::invalid_argument("unknown mark: " + s);
}

Eigen::VectorXd midranks(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    Eigen::VectorXd ranks(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[idx[j + 1]] == values[idx[i]])
            ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks(static_cast<Eigen::Index>(idx[k])) = r;
        i = j + 1;
    }
    return ranks;
}

double exact_rank_sum_p(double u, std::size_t m, std::size_t n)
{
    // Coefficients of the Gaussian binomial [m+n choose m]_q count the
    // arrangements giving each value of U.
    const std::size_t top = m * n;
    std::vector<long double> c(top + 1, 0.0L);
    c[0] = 1.0L;
    for (std::size_t i = 1; i <= m; ++i) {
        // multiply by (1 - q^(n+i))
        const std::size_t s = n + i;
        for (std::size_t k = top; k >= s; --k) {
            c[k] -= c[k - s];
            if (k == s)
                break;
        }
        // divide by (1 - q^i)
        for (std::size_t k = i; k <= top; ++k)
            c[k] += c[k - i];
    }
    const long double total = std::accumulate(c.begin(), c.end(), 0.0L);
    const auto obs = static_cast<std::size_t>(std::llround(u));
    long double lower = 0.0L, upper = 0.0L;
    for (std::size_t k = 0; k <= top; ++k) {
        if (k <= obs)
            lower += c[k];
        if (k >= obs)
            upper += c[k];
    }
    const long double p = 2.0L * std::min(lower, upper) / total;
    return static_cast<double>(std::min(p, 1.0L));
}

WilcoxonResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b, double alpha)
{
    const std::size_t m = a.size(), n = b.size();
    if (m < 2 || n < 2)
        throw std::invalid_argument("wilcoxon_rank_sum: both samples need at least two values");
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const Eigen::VectorXd ranks = midranks(pooled);
    const double rank_a = ranks.head(static_cast<Eigen::Index>(m)).sum();
    const double rank_b = ranks.tail(static_cast<Eigen::Index>(n)).sum();
    const double md = static_cast<double>(m), nd = static_cast<double>(n);

    WilcoxonResult res;
    res.u = rank_a - md * (md + 1.0) / 2.0;

    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    bool ties = false;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i])
            ++j;
        const double t = static_cast<double>(j - i + 1);
        if (t > 1.0) {
            ties = true;
            tie_term += t * t * t - t;
        }
        i = j + 1;
    }

    if (!ties && m < 50 && n < 50) {
        res.exact = true;
        res.p = exact_rank_sum_p(res.u, m, n);
    } else {
        const double total = md + nd;
        const double mu = md * nd / 2.0;
        const double var = md * nd / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
        if (var <= 0.0) {
            res.p = 1.0;
        } else {
            const double z = std::max(std::abs(res.u - mu) - 0.5, 0.0) / std::sqrt(var);
            res.p = std::min(1.0, std::erfc(z / std::numbers::sqrt2));
        }
    }

    if (res.p < alpha) {
        const double diff = median(a) - median(b);
        const double rank_diff = rank_a / md - rank_b / nd;
        const double sign = diff != 0.0 ? diff : rank_diff;
        if (sign < 0.0)
            res.mark = Mark::Better;
        else if (sign > 0.0)
            res.mark = Mark::Worse;
    }
    return res;
}

Eigen::VectorXd row_ranks(std::span<const double> values)
{
    return midranks(values);
}

Eigen::VectorXd mean_rank(const Eigen::MatrixXd& means)
{
    if (means.rows() == 0 || means.cols() == 0)
        throw std::invalid_argument("mean_rank: empty table");
    if (!means.array().isFinite().all())
        throw std::invalid_argument("mean_rank: missing cell");
    Eigen::VectorXd total = Eigen::VectorXd::Zero(means.cols());
    std::vector<double> row(static_cast<std::size_t>(means.cols()));
    for (Eigen::Index r = 0; r < means.rows(); ++r) {
        for (Eigen::Index c = 0; c < means.cols(); ++c)
            row[static_cast<std::size_t>(c)] = means(r, c);
        total += row_ranks(row);
    }
    return total / static_cast<double>(means.rows());
}

double improvement_metric(double baseline, double variant)
{
    if (baseline == 0.0)
        throw std::invalid_argument("improvement_metric: baseline is zero");
    return (baseline - variant) / baseline * 100.0;
}

double mean(std::span<const double> v)
{
    if (v.empty())
        throw std::invalid_argument("mean: empty sample");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_stddev(std::span<const double> v)
{
    if (v.size() < 2)
        return 0.0;
    const double mu = mean(v);
    double ss = 0.0;
    for (double x : v)
        ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median(std::span<const double> v)
{
    if (v.empty())
        throw std::invalid_argument("median: empty sample");
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    const std::size_t h = s.size() / 2;
    return s.size() % 2 ? s[h] : 0.5 * (s[h - 1] + s[h]);
}

} // namespace usea
