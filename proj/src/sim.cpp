#include "iccbf/sim.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace iccbf {

std::string to_string(TerminalKind kind) {
    switch (kind) {
    case TerminalKind::Completed: return "Completed";
    case TerminalKind::InfeasibleAtState: return "InfeasibleAtState";
    case TerminalKind::NoAdmissibleCandidate: return "NoAdmissibleCandidate";
    }
    return "Unknown";
}

namespace {

std::vector<double> b_stack(const BarrierCascade& cascade, const Vec& x) {
    std::vector<double> b(static_cast<std::size_t>(cascade.depth()) + 1);
    for (int i = 0; i <= cascade.depth(); ++i)
        b[static_cast<std::size_t>(i)] = cascade.eval_b(x, i);
    return b;
}

// Shared rollout loop; `pick` returns the cascade driving the current step or
// throws the error matching its terminal semantics.
template <typename PickFn>
TrajectoryLog run_rollout(const SystemModel& model, PickFn&& pick, const NominalController& nominal,
                          const Vec& x0, int horizon, const FilterOptions& filter_options) {
    if (horizon < 1) throw OutOfRange("rollout horizon must be at least 1");
    if (!all_finite(x0)) throw NonFiniteState("rollout started from a non-finite state");
    if (x0.size() != static_cast<std::size_t>(model.state_dim()))
        throw DimensionMismatch("initial state has wrong dimension");

    TrajectoryLog log;
    log.steps.reserve(static_cast<std::size_t>(horizon));
    Vec x = x0;
    for (int t = 0; t < horizon; ++t) {
        const Vec u_nom = nominal(x);
        StepRecord record;
        record.t = t;
        record.x = x;
        record.u_nom = u_nom;
        try {
            const BarrierCascade& cascade = pick(x, u_nom);
            record.alpha_id = cascade.alpha().id();
            // Invariance is only certified inside the inner safe set; leaving
            // it ends the experiment rather than silently continuing.
            if (!cascade.membership(x).in_c_star)
                throw InfeasibleAtState("state left the inner safe set");
            const FilterResult filtered = safe_control(cascade, x, u_nom, filter_options);
            record.u_safe = filtered.u_safe;
            record.psi = filtered.psi_value;
            record.modified = filtered.modified;
            record.b = b_stack(cascade, x);
        } catch (const NoAdmissibleCandidate&) {
            log.final_state = x;
            log.terminal = {TerminalKind::NoAdmissibleCandidate, t};
            return log;
        } catch (const InfeasibleAtState&) {
            log.final_state = x;
            log.terminal = {TerminalKind::InfeasibleAtState, t};
            return log;
        }
        x = model.step(x, record.u_safe);
        log.steps.push_back(std::move(record));
    }
    log.final_state = x;
    log.terminal = {TerminalKind::Completed, horizon};
    return log;
}

} // namespace

TrajectoryLog rollout(const BarrierCascade& cascade, const NominalController& nominal,
                      const Vec& x0, int horizon, const FilterOptions& filter_options) {
    auto pick = [&cascade](const Vec&, const Vec&) -> const BarrierCascade& { return cascade; };
    return run_rollout(cascade.model(), pick, nominal, x0, horizon, filter_options);
}

TrajectoryLog rollout_adaptive(const AdaptiveSelector& selector, const NominalController& nominal,
                               const Vec& x0, int horizon, const FilterOptions& filter_options) {
    AdaptState state = selector.initial_state();
    auto pick = [&selector, &state](const Vec& x, const Vec& u_nom) -> const BarrierCascade& {
        return selector.cascade_for(selector.select(state, x, u_nom));
    };
    const SystemModel& model = selector.cascade_for(0).model();
    TrajectoryLog log = run_rollout(model, pick, nominal, x0, horizon, filter_options);
    log.switch_count = state.switch_count;
    return log;
}

Metrics compute_metrics(const TrajectoryLog& log, const SystemModel& model,
                        const std::optional<Vec>& goal) {
    if (log.steps.empty()) throw EmptyLog("trajectory log has no steps");

    Metrics m;
    m.min_h = std::numeric_limits<double>::infinity();
    double deviation_sum = 0.0;
    for (const StepRecord& s : log.steps) {
        m.min_h = std::min(m.min_h, model.barrier(s.x));
        Vec diff(s.u_safe.size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = s.u_safe[i] - s.u_nom[i];
        deviation_sum += euclidean_norm(diff);
    }
    m.min_h = std::min(m.min_h, model.barrier(log.final_state));
    m.violation = m.min_h < 0.0;
    m.mean_deviation = deviation_sum / static_cast<double>(log.steps.size());
    m.switches = log.switch_count;

    if (model.name() == "double_integrator") {
        m.progress = log.final_state[0];
    } else if (goal && goal->size() >= 2) {
        const double dx = log.final_state[0] - (*goal)[0];
        const double dy = log.final_state[1] - (*goal)[1];
        m.progress = std::sqrt(dx * dx + dy * dy);
    } else {
        m.progress = std::numeric_limits<double>::quiet_NaN();
    }
    return m;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log, const SystemModel& model) {
    const int n = model.state_dim();
    const int mdim = model.input_dim();
    const int levels = log.steps.empty() ? 1 : static_cast<int>(log.steps.front().b.size());

    os << "t";
    for (int i = 0; i < n; ++i) os << ",x" << i;
    for (int i = 0; i < mdim; ++i) os << ",u_nom" << i;
    for (int i = 0; i < mdim; ++i) os << ",u_safe" << i;
    for (int i = 0; i < levels; ++i) os << ",b" << i;
    os << ",psi,alpha_id,modified\n";

    for (const StepRecord& s : log.steps) {
        os << s.t;
        for (double v : s.x) os << ',' << format_double(v);
        for (double v : s.u_nom) os << ',' << format_double(v);
        for (double v : s.u_safe) os << ',' << format_double(v);
        for (double v : s.b) os << ',' << format_double(v);
        os << ',' << format_double(s.psi) << ',' << s.alpha_id << ',' << (s.modified ? 1 : 0)
           << '\n';
    }
}

NominalController constant_controller(Vec u) {
    return [u = std::move(u)](const Vec&) { return u; };
}

NominalController unicycle_goto_controller(const SystemModel& model, Vec goal, double v_gain,
                                           double omega_gain) {
    const double v_max = model.input_box().hi(0);
    const double omega_max = model.input_box().hi(1);
    return [goal = std::move(goal), v_gain, omega_gain, v_max, omega_max](const Vec& x) -> Vec {
        const double dx = goal[0] - x[0];
        const double dy = goal[1] - x[1];
        const double dist = std::sqrt(dx * dx + dy * dy);
        double heading_err = std::atan2(dy, dx) - x[2];
        while (heading_err > M_PI) heading_err -= 2.0 * M_PI;
        while (heading_err < -M_PI) heading_err += 2.0 * M_PI;
        const double v = std::clamp(v_gain * dist, 0.0, v_max);
        const double omega = std::clamp(omega_gain * heading_err, -omega_max, omega_max);
        return {v, omega};
    };
}

} // namespace iccbf
