#pragma once

#include "usea/engine.hpp"
#include "usea/stats.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace usea {

// One column of an experiment table. Each run overwrites the template's
// problem and dim with its grid cell and sets its own seed.
struct AlgorithmSpec {
    std::string name;
    UseaConfig config;
};

struct ExperimentSpec {
    std::vector<AlgorithmSpec> algorithms;
    std::vector<std::string> problems;
    std::vector<Eigen::Index> dims;
    std::size_t runs = 30;
    std::uint64_t base_seed = 0;
    std::size_t workers = 1;
    std::string reference; // column the marks compare against; first algorithm when empty
    double alpha = 0.05;
    std::string summary_path; // optional outputs
    std::string raw_path;

    std::size_t cell_count() const { return problems.size() * dims.size(); }
    const std::string& reference_name() const;
    void validate() const;
};

// Seed of run r in cell c. Cells enumerate the (problem, dim) grid, problem
// major, and every algorithm in a cell reuses the same seeds.
std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t cell, std::size_t runs, std::size_t run);

struct RunRecord {
    std::string algorithm;
    std::string problem;
    Eigen::Index dim = 0;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error; // set when the run threw
    RunTrace trace;
};

struct CellSummary {
    std::string problem;
    Eigen::Index dim = 0;
    std::string algorithm;
    std::size_t runs = 0;      // requested
    std::size_t completed = 0; // successful
    double mean = 0.0, stddev = 0.0, median = 0.0;
    double rank = 0.0;      // within (problem, dim), by mean; NaN when the row is incomplete
    std::string mark;       // vs reference: "+", "-", "≈"; empty for the reference itself
    double p_value = 0.0;   // NaN for the reference
    double mean_rank = 0.0; // algorithm's mean rank over the problems at this dim

    bool incomplete() const { return completed < runs; }
};

bool same_summary(const CellSummary& a, const CellSummary& b); // NaN-aware equality

struct StatsSummary {
    std::string reference;
    std::vector<CellSummary> cells;

    const CellSummary* find(const std::string& problem, Eigen::Index dim,
                            const std::string& algorithm) const;
    bool operator==(const StatsSummary& other) const;
};

struct ExperimentResult {
    std::vector<RunRecord> records; // ordered by (problem, dim, algorithm, run)
    StatsSummary summary;
};

// Final bests of the successful runs in one cell.
std::vector<double> cell_finals(const std::vector<RunRecord>& records, const std::string& problem,
                                Eigen::Index dim, const std::string& algorithm);

// Rebuilds the summary from raw records. Algorithm order is order of first
// appearance; `runs` is the number of records per cell.
StatsSummary summarize(const std::vector<RunRecord>& records, const std::string& reference,
                       double alpha = 0.05);

using ProgressFn = std::function<void(const RunRecord&, std::size_t done, std::size_t total)>;

ExperimentResult run_experiment(const ExperimentSpec& spec, const ProgressFn& progress = {});

} // namespace usea
