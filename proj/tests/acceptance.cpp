// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include "usea/demos.hpp"
#include "usea/engine.hpp"
#include "usea/harness.hpp"
#include "usea/io.hpp"
#include "usea/operators.hpp"
#include "usea/sampling.hpp"
#include "usea/stats.hpp"
#include "usea/surrogate.hpp"
#include "oracles.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace usea;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail)
{
    std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

void info(const std::string& title, const std::string& detail)
{
    std::printf("[INFO]    %s: %s\n", title.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// ---------------------------------------------------------------- 1

void operator_fallback()
{
    RngStream gen(101);
    int mismatches = 0, total = 0;
    for (int t = 0; t < 100; ++t) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(gen.uniform_index(20));
        const std::size_t N = 2 * (3 + gen.uniform_index(30));
        const Bounds b = Bounds::uniform(n, gen.uniform(-10.0, 0.0), gen.uniform(1.0, 10.0));
        const Population pe = oracle::random_evaluated(N, b, gen);
        const Population empty(Role::Unevaluated);
        const std::uint64_t seed = gen.next_u64();
        for (auto kind : {OperatorKind::GA, OperatorKind::DE, OperatorKind::EDA}) {
            OperatorConfig op;
            op.kind = kind;
            RngStream r1(seed), r2(seed);
            const Population a = reproduce(op, pe, empty, N, b, r1);
            Population plain;
            switch (kind) {
            case OperatorKind::GA: plain = ga_offspring(pe, N, op.ga, b, r2); break;
            case OperatorKind::DE: plain = de_offspring(pe, op.de, op.ga, b, r2); break;
            case OperatorKind::EDA: plain = eda_offspring(pe, N, op.eda, b, r2); break;
            }
            ++total;
            // the streams must also be left in the same state
            if (!(a == plain) || r1.next_u64() != r2.next_u64())
                ++mismatches;
        }
    }
    report(1, "operator fallback equivalence", mismatches == 0,
           std::to_string(total - mismatches) + "/" + std::to_string(total) +
               " (GA, DE, EDA x 100 instances) bit-identical");
}

// ---------------------------------------------------------------- 2

void vwh_correctness()
{
    const Bounds b1 = Bounds::uniform(1, 0.0, 10.0);
    const VWHModel m = vwh_build(oracle::from_values({2.0, 3.0, 4.0, 5.0}), 5, b1);
    const std::array<double, 6> edges{0.0, 1.5, 2.8333333333333333, 4.1666666666666667, 5.5, 10.0};
    const std::array<double, 5> weights{0.1, 1.0, 2.0, 1.0, 0.1};
    double hand_err = 0.0;
    for (int e = 0; e < 6; ++e)
        hand_err = std::max(hand_err, std::abs(m.edges(0, e) - edges[static_cast<std::size_t>(e)]));
    for (int k = 0; k < 5; ++k)
        hand_err = std::max(hand_err, std::abs(m.probs(0, k) - weights[static_cast<std::size_t>(k)] / 4.2));

    RngStream gen(202);
    int bad = 0, zero_width_bins = 0, oracle_dims = 0;
    for (int t = 0; t < 1000; ++t) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(gen.uniform_index(5));
        const int K = 3 + static_cast<int>(gen.uniform_index(15));
        const std::size_t size = 2 + gen.uniform_index(60);
        const Bounds b = Bounds::uniform(n, -5.0, 5.0);
        Population pop(Role::Evaluated);
        for (std::size_t i = 0; i < size; ++i) {
            DecisionVector x(n);
            for (Eigen::Index j = 0; j < n; ++j) {
                const double u = gen.uniform();
                x(j) = u < 0.1 ? -5.0 : (u < 0.2 ? 5.0 : (u < 0.25 ? 1.25 : gen.uniform(-5.0, 5.0)));
            }
            pop.push_back(Individual(x, Evaluated{0.0}));
        }
        const VWHModel model = vwh_build(pop, static_cast<std::size_t>(K), b);
        bool ok = model.edges.cols() == K + 1 && model.probs.cols() == K;
        for (Eigen::Index j = 0; ok && j < n; ++j) {
            ok = std::abs(model.probs.row(j).sum() - 1.0) < 1e-12;
            for (int e = 0; e < K; ++e) {
                const double w = model.edges(j, e + 1) - model.edges(j, e);
                ok = ok && w >= 0.0 && model.probs(j, e) >= 0.0;
                if (w == 0.0) {
                    ++zero_width_bins;
                    ok = ok && model.probs(j, e) == 0.0;
                }
            }
            ok = ok && model.edges(j, 0) == -5.0 && model.edges(j, K) == 5.0;

            const Eigen::MatrixXd data = pop.as_matrix();
            std::vector<double> col(data.col(j).data(), data.col(j).data() + data.rows());
            const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
            if (*lo == *hi)
                continue;
            const oracle::OracleHist h = oracle::oracle_vwh(col, K, -5.0, 5.0);
            if (!(h.edges[static_cast<std::size_t>(K - 1)] > h.edges[1]))
                continue;
            ++oracle_dims;
            for (int e = 0; e <= K; ++e)
                ok = ok && std::abs(model.edges(j, e) - h.edges[static_cast<std::size_t>(e)]) < 1e-9;
            for (int k = 0; k < K; ++k)
                ok = ok && std::abs(model.probs(j, k) - h.probs[static_cast<std::size_t>(k)]) < 1e-9;
        }
        if (!ok)
            ++bad;
    }
    report(2, "VWH correctness", hand_err < 1e-9 && bad == 0 && zero_width_bins > 0,
           "hand trace max error " + fmt("%.2e", hand_err) + "; " + std::to_string(1000 - bad) +
               "/1000 populations valid (" + std::to_string(oracle_dims) + " dims vs oracle, " +
               std::to_string(zero_width_bins) + " zero-width bins)");
}

// ---------------------------------------------------------------- 3

void de_algebra()
{
    DecisionVector best(3), r1(3), r2(3), r3(3), r4(3);
    best << 1.0, -2.0, 0.25;
    r1 << 4.0, 1.0, -1.0;
    r2 << -3.0, 0.5, 2.0;
    r3 << 0.0, 7.0, 1.0;
    r4 << 4.0, 1.0, -1.0;
    // r1 - r2 + r3 - r4 cancels when r4 = r1 and r3 = r2
    const std::array<DecisionVector, 5> pool{r1, r2, r2, r1, r3};
    const bool cancel = de_mutant(DEVariant::Best2, DecisionVector::Zero(3), best, pool, 0.5) == best;

    RngStream rng(303);
    bool cr1 = true, cr0 = true;
    for (int t = 0; t < 1000; ++t) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform_index(30));
        DecisionVector x(n), v(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            x(j) = rng.normal();
            v(j) = x(j) + 1.0 + std::abs(rng.normal());
        }
        cr1 = cr1 && de_crossover(x, v, 1.0, rng) == v;
        const DecisionVector u = de_crossover(x, v, 0.0, rng);
        cr0 = cr0 && (u.array() != x.array()).count() == 1 && (u.array() == v.array()).count() == 1;
    }
    report(3, "DE algebra", cancel && cr1 && cr0,
           std::string("best/2 cancellation ") + (cancel ? "exact" : "wrong") + "; Cr=1 trial==mutant " +
               (cr1 ? "yes" : "no") + "; Cr=0 one mutant component " + (cr0 ? "yes" : "no") +
               " (1000 draws)");
}

// ---------------------------------------------------------------- 4

void selection_invariance()
{
    RngStream rng(404);
    int bad = 0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t N = 2 * (1 + rng.uniform_index(50));
        Population off(Role::Offspring);
        for (std::size_t i = 0; i < N; ++i)
            off.push_back(Individual(DecisionVector::Constant(2, static_cast<double>(i))));
        Eigen::VectorXd pred(static_cast<Eigen::Index>(N));
        for (auto& v : pred)
            v = rng.normal(0.0, 3.0);
        const Selection base = select_by_prediction(off, pred);
        bool ok = base.unevaluated.size() == N / 2;
        const std::array<Eigen::VectorXd, 4> moved{
            (pred.array() * 2.5 + 7.0).matrix(),
            pred.array().exp().matrix(),
            pred.array().cube().matrix(),
            pred.array().atan().matrix(),
        };
        for (const auto& m : moved) {
            const Selection s = select_by_prediction(off, m);
            ok = ok && s.best_index == base.best_index &&
                 s.unevaluated_indices == base.unevaluated_indices && s.unevaluated.size() == N / 2;
        }
        if (!ok)
            ++bad;
    }
    report(4, "model-assisted selection rank invariance", bad == 0,
           std::to_string(500 - bad) + "/500 vectors invariant under 4 increasing maps, |P_u| = N/2");
}

// ---------------------------------------------------------------- 5

void budget_exactness()
{
    int bad = 0, total = 0;
    for (auto v : {Variant::USEA, Variant::AL, Variant::NS, Variant::Baseline})
        for (std::size_t fes : {60u, 200u, 500u})
            for (std::size_t n : {10u, 50u}) {
                UseaConfig c;
                c.problem = "Ellipsoid";
                c.dim = 20;
                c.pop_size = n;
                c.max_fes = fes;
                c.variant = v;
                c.seed = 5000 + fes + n;
                std::size_t calls = 0;
                RunHooks hooks;
                hooks.on_evaluate = [&](const DecisionVector&, double) { ++calls; };
                const RunTrace t = run(c, hooks);
                ++total;
                if (calls != fes || t.evaluations != fes || t.best_curve.size() != fes)
                    ++bad;
            }
    report(5, "budget exactness", bad == 0,
           std::to_string(total - bad) + "/" + std::to_string(total) +
               " runs spent exactly FEs (4 variants x FEs {60,200,500} x N {10,50})");
}

// ---------------------------------------------------------------- 6

void lhs_stratification()
{
    RngStream gen(606);
    int bad = 0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t N = 1 + gen.uniform_index(100);
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(gen.uniform_index(50));
        const double lo = gen.uniform(-50.0, 0.0);
        const Bounds b = Bounds::uniform(n, lo, lo + gen.uniform(0.01, 100.0));
        if (!oracle::lhs_occupancy_exact(lhs_init(N, b, gen).as_matrix(), b))
            ++bad;
    }
    report(6, "LHS stratification", bad == 0, std::to_string(200 - bad) + "/200 designs with exact occupancy");
}

// ---------------------------------------------------------------- 7

void wilcoxon_oracle()
{
    const std::vector<double> a{1, 2, 3, 4, 5}, b{10, 11, 12, 13, 14};
    const double exact = oracle::enumerate_p(a, b);
    const double p = wilcoxon_rank_sum(a, b).p;
    report(7, "Wilcoxon oracle", std::abs(p - exact) < 0.002 && std::abs(p - 0.0079) < 0.002,
           "p = " + fmt("%.6f", p) + ", enumeration " + fmt("%.6f", exact));
}

// ---------------------------------------------------------------- 8

void motivation_ordering()
{
    std::string detail;
    bool pass = true;
    for (auto kind : {OperatorKind::GA, OperatorKind::DE, OperatorKind::EDA}) {
        int wins = 0;
        double with = 0.0, without = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto r = offspring_distribution_demo(demo_operator(kind), RngStream(800 + seed));
            wins += r.with_pu.fraction_in_region > r.without_pu.fraction_in_region;
            with += r.with_pu.fraction_in_region / 10.0;
            without += r.without_pu.fraction_in_region / 10.0;
        }
        pass = pass && wins == 10;
        detail += to_string(kind) + " " + std::to_string(wins) + "/10 (" + fmt("%.3f", with) + " vs " +
                  fmt("%.3f", without) + ") ";
    }
    report(8, "offspring shift toward P_u", pass, detail + "[DE uses rand/1]");

    OperatorConfig best2 = demo_operator(OperatorKind::DE);
    best2.de.variant = DEVariant::Best2;
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto r = offspring_distribution_demo(best2, RngStream(800 + seed));
        wins += r.with_pu.fraction_in_region > r.without_pu.fraction_in_region;
    }
    info("offspring shift with DE best/2", std::to_string(wins) + "/10 seeds");
}

// ---------------------------------------------------------------- 9-13

ExperimentSpec lzg_spec(std::size_t runs, std::size_t workers)
{
    ExperimentSpec s;
    auto add = [&](const std::string& name, Variant v, OperatorKind kind,
                   DEVariant de = DEVariant::Best2) {
        UseaConfig c;
        c.variant = v;
        c.op.kind = kind;
        c.op.de.variant = de;
        s.algorithms.push_back({name, c});
    };
    add("USEA-EDA", Variant::USEA, OperatorKind::EDA);
    add("USEA-AL", Variant::AL, OperatorKind::EDA);
    add("USEA-NS", Variant::NS, OperatorKind::EDA);
    add("EDA-LS-lite", Variant::Baseline, OperatorKind::EDA);
    add("USEA-DE-best2", Variant::USEA, OperatorKind::DE, DEVariant::Best2);
    add("NS-DE-rand1", Variant::NS, OperatorKind::DE, DEVariant::Rand1);
    s.problems = {"Ellipsoid", "Rosenbrock", "Ackley", "Griewank"};
    s.dims = {20};
    s.runs = runs;
    s.base_seed = 1000;
    s.workers = workers;
    s.reference = "USEA-EDA";
    return s;
}

void table_row(int id, const ExperimentResult& res, const std::string& problem, double usea_max,
               std::optional<double> base_min)
{
    const auto u = cell_finals(res.records, problem, 20, "USEA-EDA");
    const auto b = cell_finals(res.records, problem, 20, "EDA-LS-lite");
    if (u.size() < 2 || b.size() < 2) {
        report(id, problem + " n=20 row", false, "missing runs");
        return;
    }
    const WilcoxonResult w = wilcoxon_rank_sum(u, b);
    const double mu = mean(u), mb = mean(b);
    const bool pass = mu <= usea_max && (!base_min || mb >= *base_min) && w.p < 0.05 &&
                      w.mark == Mark::Better;
    std::string detail = "USEA-EDA mean " + fmt("%.3g", mu) + " (sd " + fmt("%.3g", sample_stddev(u)) +
                         ", limit " + fmt("%g", usea_max) + "); EDA-LS-lite mean " + fmt("%.3g", mb);
    if (base_min)
        detail += " (floor " + fmt("%g", *base_min) + ")";
    detail += "; p = " + fmt("%.2e", w.p) + " mark " + to_string(w.mark);
    report(id, problem + " n=20 row", pass, detail);
}

double med(const ExperimentResult& res, const std::string& p, const std::string& a)
{
    return median(cell_finals(res.records, p, 20, a));
}

void ablation(const ExperimentResult& res, const ExperimentSpec& spec)
{
    int usea_vs_ns = 0, both_vs_base = 0, ordering = 0;
    std::string detail;
    for (const auto& p : spec.problems) {
        const double u = med(res, p, "USEA-EDA"), ns = med(res, p, "USEA-NS"),
                     al = med(res, p, "USEA-AL"), base = med(res, p, "EDA-LS-lite");
        usea_vs_ns += u < ns;
        both_vs_base += u < base && ns < base;
        ordering += u <= al && al <= base;
        detail += p + " " + fmt("%.3g", u) + "/" + fmt("%.3g", ns) + "/" + fmt("%.3g", base) + " ";
    }
    report(11, "ablation ordering", usea_vs_ns >= 3 && both_vs_base >= 3,
           "USEA<NS on " + std::to_string(usea_vs_ns) + "/4, both<baseline on " +
               std::to_string(both_vs_base) + "/4; medians USEA/NS/baseline: " + detail);
    info("median(USEA) <= median(AL) <= median(baseline)", std::to_string(ordering) + "/4 functions");
}

void sensitivity(const ExperimentResult& res, const ExperimentSpec& spec)
{
    int positive = 0;
    std::string detail;
    for (const auto& p : spec.problems) {
        const double variant = mean(cell_finals(res.records, p, 20, "USEA-DE-best2"));
        const double baseline = mean(cell_finals(res.records, p, 20, "NS-DE-rand1"));
        const double I = improvement_metric(baseline, variant);
        positive += I > 0.0;
        detail += p + " I=" + fmt("%.1f", I) + " ";
    }
    report(12, "DE best/2 with P_u vs rand/1 without", positive >= 3,
           std::to_string(positive) + "/4 positive: " + detail);
}

void runtime(const ExperimentResult& res, const ExperimentSpec& spec)
{
    double longest = 0.0, worst_cell = 0.0;
    std::string worst_name;
    for (const auto& p : spec.problems) {
        double cell = 0.0;
        for (const auto& r : res.records)
            if (r.algorithm == "USEA-EDA" && r.problem == p && r.ok) {
                longest = std::max(longest, r.trace.wall_clock);
                cell += r.trace.wall_clock;
            }
        if (cell > worst_cell) {
            worst_cell = cell;
            worst_name = p;
        }
    }
    report(13, "runtime envelope", longest < 60.0 && worst_cell < 1800.0 && longest > 0.0,
           "longest USEA-RF run " + fmt("%.2f", longest) + " s (limit 60); slowest 30-run cell " +
               worst_name + " " + fmt("%.0f", worst_cell) + " s (limit 1800)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance checks"};
    std::size_t runs = 30, workers = 1;
    bool quick = false;
    std::string summary_out = "acceptance_summary.csv";
    app.add_option("--runs", runs, "runs per cell for the benchmark criteria")->capture_default_str();
    app.add_option("--workers", workers, "parallel runs")->capture_default_str();
    app.add_flag("--quick", quick, "skip the benchmark criteria (9-13)");
    app.add_option("--summary", summary_out, "summary CSV of the benchmark sweep")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        operator_fallback();
        vwh_correctness();
        de_algebra();
        selection_invariance();
        budget_exactness();
        lhs_stratification();
        wilcoxon_oracle();
        motivation_ordering();

        if (!quick) {
            const ExperimentSpec spec = lzg_spec(runs, workers);
            const ExperimentResult res = run_experiment(spec, [](const RunRecord& r, std::size_t done, std::size_t total) {
                if (!r.ok)
                    std::cerr << r.algorithm << " " << r.problem << " run " << r.run << " failed: " << r.error << '\n';
                if (done % 60 == 0 || done == total)
                    std::cerr << "  sweep " << done << "/" << total << '\n';
            });
            if (!summary_out.empty()) {
                std::ofstream f(summary_out);
                write_summary_csv(f, res.summary);
            }
            const std::size_t failed = static_cast<std::size_t>(
                std::count_if(res.records.begin(), res.records.end(), [](const RunRecord& r) { return !r.ok; }));
            if (failed > 0)
                info("sweep", std::to_string(failed) + " runs failed");
            table_row(9, res, "Ellipsoid", 30.0, 40.0);
            table_row(10, res, "Griewank", 12.0, std::nullopt);
            ablation(res, spec);
            sensitivity(res, spec);
            runtime(res, spec);
        }
    } catch (const std::exception& e) {
        std::printf("acceptance aborted: %s\n", e.what());
        return 2;
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
