#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace usea {

enum class Mark { Better, Worse, Similar };

// "+", "-" or "≈"; lower values are better.
std::string to_string(Mark m);
Mark parse_mark(const std::string& s);

struct WilcoxonResult {
    double p = 1.0;
    Mark mark = Mark::Similar; // a relative to b
    double u = 0.0;            // Mann-Whitney U of sample a
    bool exact = false;        // exact null distribution used
};

// Average ranks (1-based) of the pooled values; ties share the mean rank.
Eigen::VectorXd midranks(std::span<const double> values);

// Two-sided Wilcoxon rank-sum test. Tie-free samples with both sizes below
// 50 use the exact null distribution of U; otherwise the normal
// approximation with tie-corrected variance and continuity correction.
WilcoxonResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b,
                                 double alpha = 0.05);

// Exact two-sided p-value for U under H0 with sample sizes m and n.
double exact_rank_sum_p(double u, std::size_t m, std::size_t n);

// Rows are problems, columns are algorithms (mean values). Returns each
// algorithm's rank averaged over problems; ties get average ranks.
Eigen::VectorXd mean_rank(const Eigen::MatrixXd& means);

// Ranks of one row, ascending, ties averaged.
Eigen::VectorXd row_ranks(std::span<const double> values);

// (baseline - variant) / baseline * 100.
double improvement_metric(double baseline, double variant);

double mean(std::span<const double> v);
double sample_stddev(std::span<const double> v);
double median(std::span<const double> v);

} // namespace usea
