#pragma once

#include "usea/demos.hpp"
#include "usea/harness.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace usea {

inline constexpr int kSchemaVersion = 1;

// Missing keys keep their defaults, so partial objects are accepted.
// "operator" and "surrogate" may be given either as a name or as an object.
void to_json(nlohmann::json& j, const UseaConfig& c);
void from_json(const nlohmann::json& j, UseaConfig& c);

void to_json(nlohmann::json& j, const GenerationRecord& g);
void from_json(const nlohmann::json& j, GenerationRecord& g);

void to_json(nlohmann::json& j, const RunTrace& t);
void from_json(const nlohmann::json& j, RunTrace& t);

void to_json(nlohmann::json& j, const RunRecord& r);
void from_json(const nlohmann::json& j, RunRecord& r);

// Experiment file. Top-level "fes" and "pop" override every algorithm.
ExperimentSpec experiment_spec_from_json(const nlohmann::json& j);
ExperimentSpec load_experiment_spec(const std::string& path);

void write_trace_json(std::ostream& os, const RunTrace& trace);

struct RawResults {
    std::string reference;
    double alpha = 0.05;
    std::vector<RunRecord> records;
};

void write_raw_json(std::ostream& os, const RawResults& raw);
RawResults read_raw_json(std::istream& is);

void write_summary_csv(std::ostream& os, const StatsSummary& summary);
StatsSummary read_summary_csv(std::istream& is);

void write_offspring_demo_csv(std::ostream& os, const std::vector<OffspringDemoReport>& reports);
void write_case_study_csv(std::ostream& grid, std::ostream& offspring, const CaseStudyReport& r);

} // namespace usea
