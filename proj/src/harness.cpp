#include "usea/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace usea {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_double(double a, double b)
{
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

} // namespace

const std::string& ExperimentSpec::reference_name() const
{
    if (algorithms.empty())
        throw std::invalid_argument("experiment: no algorithms");
    return reference.empty() ? algorithms.front().name : reference;
}

void ExperimentSpec::validate() const
{
    if (algorithms.empty())
        throw std::invalid_argument("experiment: no algorithms");
    if (problems.empty() || dims.empty())
        throw std::invalid_argument("experiment: empty problem grid");
    if (runs < 1)
        throw std::invalid_argument("experiment: runs must be at least 1");
    if (workers < 1)
        throw std::invalid_argument("experiment: workers must be at least 1");
    for (std::size_t i = 0; i < algorithms.size(); ++i) {
        if (algorithms[i].name.empty())
            throw std::invalid_argument("experiment: algorithm without a name");
        for (std::size_t j = 0; j < i; ++j)
            if (algorithms[j].name == algorithms[i].name)
                throw std::invalid_argument("experiment: duplicate algorithm " + algorithms[i].name);
    }
    const auto& ref = reference_name();
    if (std::none_of(algorithms.begin(), algorithms.end(),
                     [&](const AlgorithmSpec& a) { return a.name == ref; }))
        throw std::invalid_argument("experiment: unknown reference " + ref);
    // problem names and dimensions are checked up front so that a typo does
    // not surface as hundreds of failed runs
    for (const auto& p : problems)
        for (auto d : dims)
            (void)problem_registry(p, d);
    for (const auto& a : algorithms) {
        UseaConfig c = a.config;
        c.problem = problems.front();
        c.dim = dims.front();
        c.validate();
    }
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t cell, std::size_t runs, std::size_t run)
{
    return base_seed + static_cast<std::uint64_t>(cell) * runs + run;
}

bool same_summary(const CellSummary& a, const CellSummary& b)
{
    return a.problem == b.problem && a.dim == b.dim && a.algorithm == b.algorithm &&
           a.runs == b.runs && a.completed == b.completed && same_double(a.mean, b.mean) &&
           same_double(a.stddev, b.stddev) && same_double(a.median, b.median) &&
           same_double(a.rank, b.rank) && a.mark == b.mark && same_double(a.p_value, b.p_value) &&
           same_double(a.mean_rank, b.mean_rank);
}

const CellSummary* StatsSummary::find(const std::string& problem, Eigen::Index dim,
                                      const std::string& algorithm) const
{
    for (const auto& c : cells)
        if (c.problem == problem && c.dim == dim && c.algorithm == algorithm)
            return &c;
    return nullptr;
}

bool StatsSummary::operator==(const StatsSummary& other) const
{
    return reference == other.reference &&
           std::equal(cells.begin(), cells.end(), other.cells.begin(), other.cells.end(),
                      same_summary);
}

std::vector<double> cell_finals(const std::vector<RunRecord>& records, const std::string& problem,
                                Eigen::Index dim, const std::string& algorithm)
{
    std::vector<double> out;
    for (const auto& r : records)
        if (r.ok && r.problem == problem && r.dim == dim && r.algorithm == algorithm)
            out.push_back(r.trace.final_f);
    return out;
}

namespace {

template <class T>
void push_unique(std::vector<T>& v, const T& x)
{
    if (std::find(v.begin(), v.end(), x) == v.end())
        v.push_back(x);
}

} // namespace

StatsSummary summarize(const std::vector<RunRecord>& records, const std::string& reference,
                       double alpha)
{
    std::vector<std::string> algorithms, problems;
    std::vector<Eigen::Index> dims;
    for (const auto& r : records) {
        push_unique(algorithms, r.algorithm);
        push_unique(problems, r.problem);
        push_unique(dims, r.dim);
    }
    if (!records.empty() && std::find(algorithms.begin(), algorithms.end(), reference) == algorithms.end())
        throw std::invalid_argument("summarize: reference " + reference + " has no runs");

    StatsSummary summary;
    summary.reference = reference;
    const auto k = static_cast<Eigen::Index>(algorithms.size());

    for (auto dim : dims) {
        const std::size_t first = summary.cells.size();
        std::vector<Eigen::VectorXd> complete_rows;
        for (const auto& problem : problems) {
            const std::size_t row_start = summary.cells.size();
            const auto ref = cell_finals(records, problem, dim, reference);
            Eigen::VectorXd means(k);
            bool full = true;
            for (Eigen::Index a = 0; a < k; ++a) {
                const auto& name = algorithms[static_cast<std::size_t>(a)];
                CellSummary c;
                c.problem = problem;
                c.dim = dim;
                c.algorithm = name;
                c.runs = static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [&](const RunRecord& r) {
                    return r.problem == problem && r.dim == dim && r.algorithm == name;
                }));
                const auto finals = cell_finals(records, problem, dim, name);
                c.completed = finals.size();
                if (c.completed < c.runs)
                    full = false;
                if (finals.empty()) {
                    c.mean = c.stddev = c.median = kNaN;
                } else {
                    c.mean = mean(finals);
                    c.stddev = sample_stddev(finals);
                    c.median = median(finals);
                }
                means(a) = c.mean;
                if (name == reference) {
                    c.p_value = kNaN;
                } else if (finals.size() >= 2 && ref.size() >= 2) {
                    const auto w = wilcoxon_rank_sum(finals, ref, alpha);
                    c.p_value = w.p;
                    c.mark = to_string(w.mark);
                } else {
                    c.p_value = kNaN;
                }
                summary.cells.push_back(std::move(c));
            }
            if (full) {
                std::vector<double> row(means.data(), means.data() + k);
                const Eigen::VectorXd ranks = row_ranks(row);
                for (Eigen::Index a = 0; a < k; ++a)
                    summary.cells[row_start + static_cast<std::size_t>(a)].rank = ranks(a);
                complete_rows.push_back(ranks);
            } else {
                for (Eigen::Index a = 0; a < k; ++a)
                    summary.cells[row_start + static_cast<std::size_t>(a)].rank = kNaN;
            }
        }
        Eigen::VectorXd mr = Eigen::VectorXd::Constant(k, kNaN);
        if (!complete_rows.empty()) {
            mr.setZero();
            for (const auto& r : complete_rows)
                mr += r;
            mr /= static_cast<double>(complete_rows.size());
        }
        for (std::size_t i = first; i < summary.cells.size(); ++i)
            summary.cells[i].mean_rank = mr((i - first) % algorithms.size());
    }
    return summary;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const ProgressFn& progress)
{
    spec.validate();

    struct Task {
        std::size_t algorithm, problem, dim, run, cell;
    };
    std::vector<Task> tasks;
    for (std::size_t p = 0; p < spec.problems.size(); ++p)
        for (std::size_t d = 0; d < spec.dims.size(); ++d)
            for (std::size_t a = 0; a < spec.algorithms.size(); ++a)
                for (std::size_t r = 0; r < spec.runs; ++r)
                    tasks.push_back({a, p, d, r, p * spec.dims.size() + d});

    ExperimentResult result;
    result.records.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    std::size_t done = 0;
    std::mutex progress_mutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const Task& t = tasks[i];
            RunRecord& rec = result.records[i];
            rec.algorithm = spec.algorithms[t.algorithm].name;
            rec.problem = spec.problems[t.problem];
            rec.dim = spec.dims[t.dim];
            rec.run = t.run;
            rec.seed = cell_seed(spec.base_seed, t.cell, spec.runs, t.run);
            UseaConfig config = spec.algorithms[t.algorithm].config;
            config.problem = rec.problem;
            config.dim = rec.dim;
            config.seed = rec.seed;
            try {
                rec.trace = run(config);
                rec.ok = true;
            } catch (const std::exception& e) {
                rec.trace.config = config;
                rec.error = e.what();
            }
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(rec, ++done, tasks.size());
            }
        }
    };

    const std::size_t n_threads = std::min(spec.workers, tasks.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n_threads; ++w)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();

    result.summary = summarize(result.records, spec.reference_name(), spec.alpha);
    return result;
}

} // namespace usea
