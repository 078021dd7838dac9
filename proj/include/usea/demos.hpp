#pragma once

#include "usea/operators.hpp"
#include "usea/random_forest.hpp"

#include <vector>

namespace usea {

// Two-cluster setup on the 1-D case function, minimised as -x sin x on
// [0, 12]: evaluated parents near the poor basin, screened offspring near
// the global basin.
struct OffspringDemoParams {
    std::size_t pop_size = 30;            // N
    double parent_mean = 2.0, parent_sd = 0.6;
    double cluster_mean = 8.0, cluster_sd = 0.8;
    double lower = 0.0, upper = 12.0;     // truncation box
    std::size_t offspring = 10000;        // per condition
    double region_lo = 6.0, region_hi = 10.0;
    std::size_t histogram_bins = 24;
    bool force_empty_pu = false;          // use P_e alone in both conditions
};

struct OffspringCondition {
    std::vector<double> samples;
    std::vector<std::size_t> histogram; // equal-width bins over [lower, upper]
    double fraction_in_region = 0.0;
};

struct OffspringDemoReport {
    OperatorConfig op;
    OffspringDemoParams params;
    Population evaluated{Role::Evaluated};
    Population unevaluated{Role::Unevaluated};
    OffspringCondition with_pu, without_pu;
};

// Both conditions draw from the same child stream, so the only difference
// between them is P_u.
OffspringDemoReport offspring_distribution_demo(const OperatorConfig& op, const RngStream& rng,
                                                const OffspringDemoParams& params = {});

// Operator settings used for the demo when none are given (DE uses rand/1).
OperatorConfig demo_operator(OperatorKind kind);

struct CaseStudyParams {
    std::size_t training_points = 8;
    std::size_t grid_points = 241;
    std::size_t offspring = 30;
    RandomForestParams rf;
};

struct CaseStudyGridRow {
    double x = 0.0, truth = 0.0, mean = 0.0, stddev = 0.0, ei = 0.0;
};

struct CaseStudyOffspring {
    double x = 0.0, truth = 0.0, predicted = 0.0;
    std::size_t rank = 0; // 1 = selected for evaluation
    bool unevaluated = false; // member of P_u
};

struct CaseStudyReport {
    Eigen::VectorXd train_x, train_y;
    double incumbent = 0.0; // best training value
    std::vector<CaseStudyGridRow> grid;
    double argmax_ei = 0.0, max_ei = 0.0;
    std::vector<CaseStudyOffspring> offspring;
};

CaseStudyReport case_study_1d(const RngStream& rng, const CaseStudyParams& params = {});

} // namespace usea
