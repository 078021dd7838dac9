#include "usea/demos.hpp"
#include "usea/engine.hpp"
#include "usea/harness.hpp"
#include "usea/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

std::ofstream open_out(const std::string& path)
{
    const std::filesystem::path p(path);
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    return out;
}

void print_summary(const usea::StatsSummary& s)
{
    std::printf("%-12s %4s %-16s %5s %13s %12s %13s %5s %s\n", "problem", "dim", "algorithm", "ok",
                "mean", "std", "median", "rank", "mark");
    for (const auto& c : s.cells)
        std::printf("%-12s %4ld %-16s %2zu/%-2zu %13.4e %12.4e %13.4e %5.1f %s\n", c.problem.c_str(),
                    static_cast<long>(c.dim), c.algorithm.c_str(), c.completed, c.runs, c.mean,
                    c.stddev, c.median, c.rank, c.mark.c_str());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Surrogate-assisted evolutionary optimization with unevaluated solutions"};
    app.require_subcommand(1);

    usea::UseaConfig config;
    std::string op_name = "eda", surrogate_name = "rf", variant_name = "usea", de_variant;
    std::size_t tau = 0, runs = 30, workers = 1;
    std::string out;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--problem", config.problem, "benchmark name")->capture_default_str();
        sub->add_option("--dim", config.dim, "dimension")->capture_default_str();
        sub->add_option("--operator", op_name, "reproduction operator")
            ->check(CLI::IsMember({"ga", "de", "eda"}))
            ->capture_default_str();
        sub->add_option("--surrogate", surrogate_name, "surrogate model")
            ->check(CLI::IsMember({"rf", "gp"}))
            ->capture_default_str();
        sub->add_option("--variant", variant_name, "algorithm variant")
            ->check(CLI::IsMember({"usea", "al", "ns", "baseline"}))
            ->capture_default_str();
        sub->add_option("--de-variant", de_variant, "DE mutation (rand/1, best/2, ...)");
        sub->add_option("--fes", config.max_fes, "evaluation budget")->capture_default_str();
        sub->add_option("--pop", config.pop_size, "population size N")->capture_default_str();
        sub->add_option("--seed", config.seed, "random seed")->capture_default_str();
        sub->add_option("--tau", tau, "training set size (default 2N)");
    };
    auto finish_config = [&] {
        config.op.kind = usea::parse_operator(op_name);
        config.surrogate.kind = usea::parse_surrogate(surrogate_name);
        config.variant = usea::parse_variant(variant_name);
        if (!de_variant.empty())
            config.op.de.variant = usea::parse_de_variant(de_variant);
        if (tau > 0)
            config.tau = tau;
    };

    auto* run_cmd = app.add_subcommand("run", "single run, writes a trace JSON");
    add_common(run_cmd);
    run_cmd->add_option("--out", out, "trace file (stdout when omitted)");

    auto* bench_cmd = app.add_subcommand("bench", "experiment sweep, writes summary CSV and raw JSON");
    std::string spec_path;
    bench_cmd->add_option("spec", spec_path, "experiment JSON; flags describe a one-algorithm sweep when omitted");
    add_common(bench_cmd);
    bench_cmd->add_option("--runs", runs, "runs per cell")->capture_default_str();
    bench_cmd->add_option("--workers", workers, "parallel runs")->capture_default_str();
    bench_cmd->add_option("--out", out, "output prefix")->capture_default_str();

    auto* demo_cmd = app.add_subcommand("demo", "demo reports");
    demo_cmd->require_subcommand(1);
    auto* offspring_demo = demo_cmd->add_subcommand("offspring", "offspring distribution with and without P_u");
    auto* case_demo = demo_cmd->add_subcommand("case-study", "1-D random forest mean, spread and EI snapshot");
    for (auto* d : {offspring_demo, case_demo}) {
        d->add_option("--seed", config.seed, "random seed")->capture_default_str();
        d->add_option("--out", out, "output prefix")->capture_default_str();
    }
    offspring_demo->add_option("--de-variant", de_variant, "DE mutation used in the demo");

    auto* stats_cmd = app.add_subcommand("stats", "recompute the summary from raw JSON");
    std::string raw_path;
    stats_cmd->add_option("raw", raw_path, "raw JSON")->required();
    stats_cmd->add_option("--out", out, "summary CSV (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            finish_config();
            const auto trace = usea::run(config);
            std::cerr << usea::display_name(config.variant) << " " << config.problem << " n="
                      << config.dim << " final=" << trace.final_f << " evals=" << trace.evaluations
                      << " time=" << trace.wall_clock << "s\n";
            if (out.empty()) {
                usea::write_trace_json(std::cout, trace);
            } else {
                auto f = open_out(out);
                usea::write_trace_json(f, trace);
            }
        } else if (*bench_cmd) {
            usea::ExperimentSpec spec;
            if (!spec_path.empty()) {
                spec = usea::load_experiment_spec(spec_path);
                if (bench_cmd->count("--workers"))
                    spec.workers = workers;
            } else {
                finish_config();
                spec.algorithms.push_back({usea::display_name(config.variant) + "-" + op_name, config});
                spec.problems = {config.problem};
                spec.dims = {config.dim};
                spec.runs = runs;
                spec.base_seed = config.seed;
                spec.workers = workers;
            }
            if (out.empty())
                out = "bench";
            if (spec.summary_path.empty())
                spec.summary_path = out + "_summary.csv";
            if (spec.raw_path.empty())
                spec.raw_path = out + "_raw.json";
            const auto result = usea::run_experiment(spec, [](const usea::RunRecord& r, std::size_t done, std::size_t total) {
                std::cerr << "[" << done << "/" << total << "] " << r.algorithm << " " << r.problem
                          << " n=" << r.dim << " run " << r.run << ": "
                          << (r.ok ? std::to_string(r.trace.final_f) : "FAILED " + r.error) << '\n';
            });
            auto csv = open_out(spec.summary_path);
            usea::write_summary_csv(csv, result.summary);
            auto raw = open_out(spec.raw_path);
            usea::write_raw_json(raw, {spec.reference_name(), spec.alpha, result.records});
            print_summary(result.summary);
        } else if (*demo_cmd) {
            const usea::RngStream rng(config.seed);
            if (*offspring_demo) {
                std::vector<usea::OffspringDemoReport> reports;
                for (auto kind : {usea::OperatorKind::GA, usea::OperatorKind::DE, usea::OperatorKind::EDA}) {
                    auto op = usea::demo_operator(kind);
                    if (!de_variant.empty())
                        op.de.variant = usea::parse_de_variant(de_variant);
                    reports.push_back(usea::offspring_distribution_demo(op, rng));
                    const auto& r = reports.back();
                    std::printf("%-4s in [%g, %g]: with P_u %.4f, without %.4f\n",
                                usea::to_string(kind).c_str(), r.params.region_lo, r.params.region_hi,
                                r.with_pu.fraction_in_region, r.without_pu.fraction_in_region);
                }
                auto f = open_out((out.empty() ? "offspring" : out) + ".csv");
                usea::write_offspring_demo_csv(f, reports);
            } else {
                const auto report = usea::case_study_1d(rng);
                const std::string prefix = out.empty() ? "case_study" : out;
                auto grid = open_out(prefix + "_grid.csv");
                auto cloud = open_out(prefix + "_offspring.csv");
                usea::write_case_study_csv(grid, cloud, report);
                std::printf("incumbent %.6g, argmax EI at x=%.4f (EI %.4g)\n", report.incumbent,
                            report.argmax_ei, report.max_ei);
            }
        } else if (*stats_cmd) {
            std::ifstream in(raw_path);
            if (!in)
                throw std::runtime_error("cannot open " + raw_path);
            const auto raw = usea::read_raw_json(in);
            const auto summary = usea::summarize(raw.records, raw.reference, raw.alpha);
            if (out.empty()) {
                usea::write_summary_csv(std::cout, summary);
            } else {
                auto f = open_out(out);
                usea::write_summary_csv(f, summary);
                print_summary(summary);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
