#pragma once

#include "cpsa/detect.hpp"
#include "cpsa/monitors.hpp"
#include "cpsa/structural.hpp"
#include "cpsa/synthesis.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace cpsa {

using Json = nlohmann::json;

/// System file: {"n", "p", "E", "A", "C"[, "B", "D", "labels"]}, matrices as
/// row-major arrays of arrays. Without B/D the canonical attack form is
/// assumed.
Json system_to_json(const DescriptorSystem& sys);
DescriptorSystem system_from_json(const Json& j);
DescriptorSystem load_system(const std::string& path);
void save_system(const DescriptorSystem& sys, const std::string& path);

/// Pattern file: entries 0 | "free" | {"range": [lo, hi]}; optional "derived"
/// list carries the linear equality ties.
Json pattern_to_json(const StructuredSystem& s);
StructuredSystem pattern_from_json(const Json& j);
StructuredSystem load_pattern(const std::string& path);

/// Attack bundle: {"attack_set", "modes", "feedback", "constant"} plus an
/// optional "filter" block for filter-realized attacks.
Json attack_to_json(const AttackSignal& a);
AttackSignal attack_from_json(const Json& j);
AttackSignal load_attack(const std::string& path);
void save_attack(const AttackSignal& a, const std::string& path);

Json verdict_to_json(const DetectabilityVerdict& v, bool budget_exhausted = false);
Json monitor_verdict_to_json(const MonitorVerdict& v);
Json zeros_to_json(const std::vector<InvariantZero>& zeros);

/// Trace CSV: header t, x_1.., y_1.., u_1.., w_1..; one row per step.
void write_trace_csv(const SimulationTrace& trace, const std::string& path,
                     const std::vector<std::string>& selections = {});
SimulationTrace read_trace_csv(const std::string& path);

/// Minimal static SVG line plot of the selected trace columns.
void write_trace_svg(const SimulationTrace& trace, const std::string& path,
                     const std::vector<std::string>& selections = {});

/// Deterministic content fingerprint of a system (dimensions + FNV-1a hash of
/// the matrix bytes, printed as hex).
std::string system_fingerprint(const DescriptorSystem& sys);

/// Merged analysis report emitted by the CLI `report` command.
/// Deterministic for fixed inputs and seed; to_json/from_json round-trip
/// losslessly (timings are payload like everything else).
struct AnalysisReport {
    std::string tool_version = kVersion;
    std::string fingerprint;
    Json steps = Json::array();  // per-analysis verdicts, in execution order
    Json settings = Json::object();

    Json to_json(bool include_timings = true) const;
    static AnalysisReport from_json(const Json& j);
};

/// Subset JSON-Schema validator (type, properties, required, items, enum)
/// backing the schema-stability tests.
bool validate_schema(const Json& doc, const Json& schema, std::string* error = nullptr);

}  // namespace cpsa
