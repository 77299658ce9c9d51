#pragma once

#include "iccbf/adapt.hpp"
#include "iccbf/filter.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace iccbf {

using NominalController = std::function<Vec(const Vec&)>;

enum class TerminalKind { Completed, InfeasibleAtState, NoAdmissibleCandidate };

std::string to_string(TerminalKind kind);

struct StepRecord {
    int t = 0;
    Vec x;       // state at the start of the step
    Vec u_nom;
    Vec u_safe;
    std::vector<double> b;  // b_0..b_r under the active candidate, evaluated at x
    double psi = 0.0;       // psi(x, u_safe)
    std::string alpha_id;
    bool modified = false;
};

struct Terminal {
    TerminalKind kind = TerminalKind::Completed;
    int t = 0;  // step index of the early stop; horizon for Completed
};

struct TrajectoryLog {
    std::vector<StepRecord> steps;  // consecutive from t = 0
    Vec final_state;                // successor of the last executed step (x0 if none ran)
    Terminal terminal;
    int switch_count = 0;
};

struct Metrics {
    double min_h = 0.0;           // minimum of h over every visited state
    bool violation = false;       // min_h < 0
    double mean_deviation = 0.0;  // mean ||u_safe - u_nom|| per executed step
    double progress = 0.0;        // problem-specific scalar; NaN when undefined
    int switches = 0;
};

// Deterministic closed-loop rollout: at each step check that the state lies in
// the active candidate's inner safe set, project the nominal input through the
// safety filter, then advance the dynamics. Filter and adaptation failures end
// the rollout with the matching terminal tag; they are data, not exceptions.
TrajectoryLog rollout(const BarrierCascade& cascade, const NominalController& nominal,
                      const Vec& x0, int horizon, const FilterOptions& filter_options = {});

// Adaptive variant: candidate re-selection before every filter call.
TrajectoryLog rollout_adaptive(const AdaptiveSelector& selector, const NominalController& nominal,
                               const Vec& x0, int horizon,
                               const FilterOptions& filter_options = {});

// Summary metrics. `goal` feeds the distance-to-goal progress figure for the
// unicycle; the double integrator reports its final position instead.
Metrics compute_metrics(const TrajectoryLog& log, const SystemModel& model,
                        const std::optional<Vec>& goal = {});

// One CSV row per step: t, x..., u_nom..., u_safe..., b0..br, psi, alpha_id,
// modified. Byte-stable for a fixed log.
void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log, const SystemModel& model);

// Shipped nominal policies.
NominalController constant_controller(Vec u);
NominalController unicycle_goto_controller(const SystemModel& model, Vec goal, double v_gain,
                                           double omega_gain);

} // namespace iccbf
