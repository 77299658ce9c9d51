#pragma once

#include "iccbf/sim.hpp"
#include "iccbf/validator.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace iccbf {

using Json = nlohmann::ordered_json;

struct NominalSpec {
    std::string type;  // "constant" | "unicycle_goto"
    Vec u;             // constant
    Vec goal;          // unicycle_goto
    double v_gain = 1.0;
    double omega_gain = 2.0;
};

struct RolloutSpec {
    Vec x0;
    int horizon = 100;
    NominalSpec nominal;
    bool adapt_enabled = false;
    int dwell = 1;
};

struct SweepSpec {
    std::vector<std::vector<double>> gammas;  // linear coefficients per cascade level
};

// Fully validated in-memory configuration of a scenario file ("iccbf/1").
struct Scenario {
    SystemModel model;
    std::vector<AlphaVector> candidates;
    int input_resolution = 11;
    ValidateOptions validation;
    std::optional<RolloutSpec> rollout;
    std::optional<SweepSpec> sweep;
};

// Parse and validate; throws ConfigError with a field-path diagnostic.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const Json& j);

ClassKFn classk_from_json(const Json& j, const std::string& path);
Json classk_to_json(const ClassKFn& fn);

Json report_to_json(const ValidationReport& report);
Json candidate_report_to_json(const CandidateReport& entry);
Json metrics_to_json(const Metrics& metrics);

NominalController make_nominal(const NominalSpec& spec, const SystemModel& model);

// Gnuplot script plotting barrier values and inputs from a trajectory CSV.
std::string gnuplot_script(const std::string& csv_name, const SystemModel& model, int levels);

} // namespace iccbf
