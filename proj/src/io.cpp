#include "usea/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace usea {

using nlohmann::json;

namespace {

template <class T>
void get_if(const json& j, const char* key, T& out)
{
    if (auto it = j.find(key); it != j.end() && !it->is_null())
        it->get_to(out);
}

template <class T>
void get_if(const json& j, const char* key, std::optional<T>& out)
{
    if (auto it = j.find(key); it != j.end())
        out = it->is_null() ? std::nullopt : std::optional<T>(it->get<T>());
}

template <class T>
json opt(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

json vec(const Eigen::VectorXd& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vec(const json& j)
{
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_schema(const json& j)
{
    const int v = j.value("schema_version", -1);
    if (v != kSchemaVersion)
        throw std::runtime_error("unsupported schema_version " + std::to_string(v));
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s)
{
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
        throw std::runtime_error("bad number in CSV: " + s);
    return v;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else if (c != '\r') {
            out.back() += c;
        }
    }
    return out;
}

const std::vector<std::string> kSummaryColumns = {
    "schema_version", "problem", "dim",  "algorithm", "runs",    "completed", "mean",
    "std",            "median",  "rank", "mark",      "p_value", "mean_rank"};

} // namespace

void to_json(json& j, const UseaConfig& c)
{
    const auto& ga = c.op.ga;
    const auto& rf = c.surrogate.rf;
    const auto& gp = c.surrogate.gp;
    j = json{
        {"problem", c.problem},
        {"dim", c.dim},
        {"pop_size", c.pop_size},
        {"max_fes", c.max_fes},
        {"variant", to_string(c.variant)},
        {"seed", c.seed},
        {"tau", opt(c.tau)},
        {"operator",
         {{"kind", to_string(c.op.kind)},
          {"ga",
           {{"beta1", ga.beta1},
            {"beta2", ga.beta2},
            {"eta_c", ga.eta_c},
            {"eta_m", ga.eta_m},
            {"crossover_prob", ga.crossover_prob},
            {"swap_prob", ga.swap_prob},
            {"p_m", opt(ga.p_m)}}},
          {"de", {{"F", c.op.de.F}, {"Cr", c.op.de.Cr}, {"variant", to_string(c.op.de.variant)}}},
          {"eda", {{"K", c.op.eda.K}}}}},
        {"surrogate",
         {{"kind", to_string(c.surrogate.kind)},
          {"rf",
           {{"n_trees", rf.n_trees},
            {"max_depth", rf.max_depth},
            {"min_samples_leaf", rf.min_samples_leaf},
            {"features_per_split", opt(rf.features_per_split)},
            {"bootstrap", rf.bootstrap}}},
          {"gp",
           {{"lengthscale_min", gp.lengthscale_min},
            {"lengthscale_max", gp.lengthscale_max},
            {"grid_points", gp.grid_points},
            {"noise", gp.noise},
            {"min_jitter", gp.min_jitter},
            {"max_jitter", gp.max_jitter}}}}},
    };
}

void from_json(const json& j, UseaConfig& c)
{
    get_if(j, "problem", c.problem);
    get_if(j, "dim", c.dim);
    get_if(j, "pop_size", c.pop_size);
    get_if(j, "max_fes", c.max_fes);
    get_if(j, "seed", c.seed);
    get_if(j, "tau", c.tau);
    if (j.contains("variant"))
        c.variant = parse_variant(j.at("variant").get<std::string>());

    if (auto it = j.find("operator"); it != j.end()) {
        if (it->is_string()) {
            c.op.kind = parse_operator(it->get<std::string>());
        } else {
            if (it->contains("kind"))
                c.op.kind = parse_operator(it->at("kind").get<std::string>());
            if (auto g = it->find("ga"); g != it->end()) {
                get_if(*g, "beta1", c.op.ga.beta1);
                get_if(*g, "beta2", c.op.ga.beta2);
                get_if(*g, "eta_c", c.op.ga.eta_c);
                get_if(*g, "eta_m", c.op.ga.eta_m);
                get_if(*g, "crossover_prob", c.op.ga.crossover_prob);
                get_if(*g, "swap_prob", c.op.ga.swap_prob);
                get_if(*g, "p_m", c.op.ga.p_m);
            }
            if (auto d = it->find("de"); d != it->end()) {
                get_if(*d, "F", c.op.de.F);
                get_if(*d, "Cr", c.op.de.Cr);
                if (d->contains("variant"))
                    c.op.de.variant = parse_de_variant(d->at("variant").get<std::string>());
            }
            if (auto e = it->find("eda"); e != it->end())
                get_if(*e, "K", c.op.eda.K);
        }
    }

    if (auto it = j.find("surrogate"); it != j.end()) {
        if (it->is_string()) {
            c.surrogate.kind = parse_surrogate(it->get<std::string>());
        } else {
            if (it->contains("kind"))
                c.surrogate.kind = parse_surrogate(it->at("kind").get<std::string>());
            if (auto r = it->find("rf"); r != it->end()) {
                get_if(*r, "n_trees", c.surrogate.rf.n_trees);
                get_if(*r, "max_depth", c.surrogate.rf.max_depth);
                get_if(*r, "min_samples_leaf", c.surrogate.rf.min_samples_leaf);
                get_if(*r, "features_per_split", c.surrogate.rf.features_per_split);
                get_if(*r, "bootstrap", c.surrogate.rf.bootstrap);
            }
            if (auto g = it->find("gp"); g != it->end()) {
                get_if(*g, "lengthscale_min", c.surrogate.gp.lengthscale_min);
                get_if(*g, "lengthscale_max", c.surrogate.gp.lengthscale_max);
                get_if(*g, "grid_points", c.surrogate.gp.grid_points);
                get_if(*g, "noise", c.surrogate.gp.noise);
                get_if(*g, "min_jitter", c.surrogate.gp.min_jitter);
                get_if(*g, "max_jitter", c.surrogate.gp.max_jitter);
            }
        }
    }
}

void to_json(json& j, const GenerationRecord& g)
{
    j = json{{"generation", g.generation},
             {"fes", g.fes},
             {"evaluated", g.evaluated},
             {"best_predicted", opt(g.best_predicted)},
             {"best_evaluated", opt(g.best_evaluated)},
             {"pu_size", g.pu_size},
             {"pu_pred_min", opt(g.pu_pred_min)},
             {"pu_pred_mean", opt(g.pu_pred_mean)},
             {"pu_pred_max", opt(g.pu_pred_max)},
             {"surrogate_fallback", g.surrogate_fallback}};
}

void from_json(const json& j, GenerationRecord& g)
{
    get_if(j, "generation", g.generation);
    get_if(j, "fes", g.fes);
    get_if(j, "evaluated", g.evaluated);
    get_if(j, "best_predicted", g.best_predicted);
    get_if(j, "best_evaluated", g.best_evaluated);
    get_if(j, "pu_size", g.pu_size);
    get_if(j, "pu_pred_min", g.pu_pred_min);
    get_if(j, "pu_pred_mean", g.pu_pred_mean);
    get_if(j, "pu_pred_max", g.pu_pred_max);
    get_if(j, "surrogate_fallback", g.surrogate_fallback);
}

void to_json(json& j, const RunTrace& t)
{
    j = json{{"config", t.config},
             {"best_curve", t.best_curve},
             {"final_x", vec(t.final_x)},
             {"final_f", t.final_f},
             {"generations", t.generations},
             {"evaluations", t.evaluations},
             {"fallbacks", t.fallbacks},
             {"wall_clock", t.wall_clock}};
}

void from_json(const json& j, RunTrace& t)
{
    get_if(j, "config", t.config);
    get_if(j, "best_curve", t.best_curve);
    if (j.contains("final_x"))
        t.final_x = vec(j.at("final_x"));
    get_if(j, "final_f", t.final_f);
    get_if(j, "generations", t.generations);
    get_if(j, "evaluations", t.evaluations);
    get_if(j, "fallbacks", t.fallbacks);
    get_if(j, "wall_clock", t.wall_clock);
}

void to_json(json& j, const RunRecord& r)
{
    j = json{{"algorithm", r.algorithm}, {"problem", r.problem}, {"dim", r.dim},
             {"run", r.run},             {"seed", r.seed},       {"ok", r.ok},
             {"error", r.error},         {"trace", r.trace}};
}

void from_json(const json& j, RunRecord& r)
{
    j.at("algorithm").get_to(r.algorithm);
    j.at("problem").get_to(r.problem);
    j.at("dim").get_to(r.dim);
    get_if(j, "run", r.run);
    get_if(j, "seed", r.seed);
    get_if(j, "ok", r.ok);
    get_if(j, "error", r.error);
    get_if(j, "trace", r.trace);
}

ExperimentSpec experiment_spec_from_json(const json& j)
{
    ExperimentSpec spec;
    for (const auto& a : j.at("algorithms")) {
        AlgorithmSpec alg;
        // config keys may sit beside "name" or inside a "config" object
        (a.contains("config") ? a.at("config") : a).get_to(alg.config);
        alg.name = a.value("name", "");
        if (alg.name.empty())
            alg.name = display_name(alg.config.variant) + "-" + to_string(alg.config.op.kind);
        if (auto fes = j.find("fes"); fes != j.end())
            fes->get_to(alg.config.max_fes);
        if (auto pop = j.find("pop"); pop != j.end())
            pop->get_to(alg.config.pop_size);
        spec.algorithms.push_back(std::move(alg));
    }
    j.at("problems").get_to(spec.problems);
    j.at("dims").get_to(spec.dims);
    get_if(j, "runs", spec.runs);
    get_if(j, "base_seed", spec.base_seed);
    get_if(j, "workers", spec.workers);
    get_if(j, "reference", spec.reference);
    get_if(j, "alpha", spec.alpha);
    get_if(j, "summary", spec.summary_path);
    get_if(j, "raw", spec.raw_path);
    spec.validate();
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return experiment_spec_from_json(json::parse(in));
}

void write_trace_json(std::ostream& os, const RunTrace& trace)
{
    json j = trace;
    j["schema_version"] = kSchemaVersion;
    os << j.dump(1) << '\n';
}

void write_raw_json(std::ostream& os, const RawResults& raw)
{
    json j{{"schema_version", kSchemaVersion},
           {"reference", raw.reference},
           {"alpha", raw.alpha},
           {"runs", raw.records}};
    os << j.dump() << '\n';
}

RawResults read_raw_json(std::istream& is)
{
    const json j = json::parse(is);
    check_schema(j);
    RawResults raw;
    j.at("reference").get_to(raw.reference);
    get_if(j, "alpha", raw.alpha);
    j.at("runs").get_to(raw.records);
    return raw;
}

void write_summary_csv(std::ostream& os, const StatsSummary& summary)
{
    os << "# reference=" << csv_field(summary.reference) << '\n';
    for (std::size_t i = 0; i < kSummaryColumns.size(); ++i)
        os << (i ? "," : "") << kSummaryColumns[i];
    os << '\n';
    for (const auto& c : summary.cells) {
        os << kSchemaVersion << ',' << csv_field(c.problem) << ',' << c.dim << ','
           << csv_field(c.algorithm) << ',' << c.runs << ',' << c.completed << ','
           << format_double(c.mean) << ',' << format_double(c.stddev) << ','
           << format_double(c.median) << ',' << format_double(c.rank) << ',' << c.mark << ','
           << format_double(c.p_value) << ',' << format_double(c.mean_rank) << '\n';
    }
}

StatsSummary read_summary_csv(std::istream& is)
{
    StatsSummary summary;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        if (line.rfind("# reference=", 0) == 0) {
            const auto f = split_csv(line.substr(12));
            summary.reference = f.empty() ? "" : f.front();
            continue;
        }
        const auto f = split_csv(line);
        if (!header) {
            if (f != kSummaryColumns)
                throw std::runtime_error("summary CSV: unexpected header");
            header = true;
            continue;
        }
        if (f.size() != kSummaryColumns.size())
            throw std::runtime_error("summary CSV: wrong field count");
        if (std::stoi(f[0]) != kSchemaVersion)
            throw std::runtime_error("summary CSV: unsupported schema_version " + f[0]);
        CellSummary c;
        c.problem = f[1];
        c.dim = std::stol(f[2]);
        c.algorithm = f[3];
        c.runs = std::stoul(f[4]);
        c.completed = std::stoul(f[5]);
        c.mean = parse_double(f[6]);
        c.stddev = parse_double(f[7]);
        c.median = parse_double(f[8]);
        c.rank = parse_double(f[9]);
        c.mark = f[10];
        c.p_value = parse_double(f[11]);
        c.mean_rank = parse_double(f[12]);
        summary.cells.push_back(std::move(c));
    }
    if (!header)
        throw std::runtime_error("summary CSV: missing header");
    return summary;
}

void write_offspring_demo_csv(std::ostream& os, const std::vector<OffspringDemoReport>& reports)
{
    if (reports.empty())
        return;
    const auto& p = reports.front().params;
    os << "# parents ~ N(" << p.parent_mean << ", " << p.parent_sd << "^2), screened offspring ~ N("
       << p.cluster_mean << ", " << p.cluster_sd << "^2), truncated to [" << p.lower << ", "
       << p.upper << "]; N=" << p.pop_size << ", offspring per condition=" << p.offspring
       << ", region=[" << p.region_lo << ", " << p.region_hi << "]\n";
    os << "# fractions:";
    for (const auto& r : reports)
        os << ' ' << to_string(r.op.kind) << " with=" << format_double(r.with_pu.fraction_in_region)
           << " without=" << format_double(r.without_pu.fraction_in_region);
    os << '\n';
    os << "operator,bin_lo,bin_hi,with_pu,without_pu\n";
    for (const auto& r : reports) {
        const double width =
            (r.params.upper - r.params.lower) / static_cast<double>(r.params.histogram_bins);
        for (std::size_t b = 0; b < r.params.histogram_bins; ++b)
            os << to_string(r.op.kind) << ',' << format_double(r.params.lower + width * b) << ','
               << format_double(r.params.lower + width * (b + 1)) << ',' << r.with_pu.histogram[b]
               << ',' << r.without_pu.histogram[b] << '\n';
    }
}

void write_case_study_csv(std::ostream& grid, std::ostream& offspring, const CaseStudyReport& r)
{
    grid << "# incumbent=" << format_double(r.incumbent) << " argmax_ei=" << format_double(r.argmax_ei)
         << " max_ei=" << format_double(r.max_ei) << '\n';
    grid << "# training:";
    for (Eigen::Index i = 0; i < r.train_x.size(); ++i)
        grid << " (" << format_double(r.train_x(i)) << ", " << format_double(r.train_y(i)) << ')';
    grid << '\n';
    grid << "x,truth,mean,stddev,ei\n";
    for (const auto& row : r.grid)
        grid << format_double(row.x) << ',' << format_double(row.truth) << ','
             << format_double(row.mean) << ',' << format_double(row.stddev) << ','
             << format_double(row.ei) << '\n';
    offspring << "x,truth,predicted,rank,unevaluated\n";
    for (const auto& o : r.offspring)
        offspring << format_double(o.x) << ',' << format_double(o.truth) << ','
                  << format_double(o.predicted) << ',' << o.rank << ',' << (o.unevaluated ? 1 : 0)
                  << '\n';
}

} // namespace usea
