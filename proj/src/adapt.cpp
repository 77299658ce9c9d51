#include "iccbf/adapt.hpp"

#include <algorithm>
#include <cmath>

namespace iccbf {

CertifiedSet::CertifiedSet(std::vector<CertifiedEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw EmptyGrid("certified set must be non-empty");
    for (const CertifiedEntry& e : entries_)
        if (e.report.verdict != Verdict::Certified)
            throw OutOfRange("candidate '" + e.alpha.id() + "' is not certified");
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const CertifiedEntry& a, const CertifiedEntry& b) {
                         return a.alpha.id() < b.alpha.id();
                     });
}

AdaptiveSelector::AdaptiveSelector(const SystemModel& model, CertifiedSet certified,
                                   CascadeSettings settings, AdaptOptions options)
    : certified_(std::move(certified)), options_(options) {
    if (options_.dwell < 1) throw OutOfRange("dwell must be at least 1");
    cascades_.reserve(certified_.size());
    for (std::size_t i = 0; i < certified_.size(); ++i)
        cascades_.emplace_back(model, certified_.at(i).alpha, settings);
}

AdaptState AdaptiveSelector::initial_state() const {
    AdaptState state;
    state.active_index = 0;
    state.active_id = certified_.at(0).alpha.id();
    state.last_switch_step = -options_.dwell;  // the very first call may switch
    return state;
}

std::size_t AdaptiveSelector::select(AdaptState& state, const Vec& x, const Vec& u_nom) const {
    const SystemModel& model = cascades_.front().model();
    const Vec nominal = model.input_box().contains(u_nom, 1e-9) ? u_nom
                                                                 : model.input_box().clamp(u_nom);

    // Admissible candidates: those whose inner safe set contains x.
    std::vector<std::size_t> admissible;
    admissible.reserve(certified_.size());
    for (std::size_t i = 0; i < certified_.size(); ++i)
        if (cascades_[i].membership(x).in_c_star) admissible.push_back(i);

    const bool active_ok =
        std::find(admissible.begin(), admissible.end(), state.active_index) != admissible.end();
    if (admissible.empty()) {
        throw NoAdmissibleCandidate("no certified candidate's inner safe set contains the state");
    }

    // Hysteresis only ever keeps the active candidate; it never blocks a
    // forced switch away from an inadmissible one.
    const bool dwell_ok = (state.step - state.last_switch_step) >= options_.dwell;
    std::size_t chosen = state.active_index;
    if (dwell_ok || !active_ok) {
        // Largest nominal-control slack wins; ties fall to the stable id order.
        double best_slack = -std::numeric_limits<double>::infinity();
        chosen = admissible.front();
        for (std::size_t idx : admissible) {
            const double slack = cascades_[idx].eval_psi(x, nominal);
            if (slack > best_slack) {
                best_slack = slack;
                chosen = idx;
            }
        }
    }

    if (chosen != state.active_index) {
        if (!cascades_[chosen].membership(x).in_c_star)
            throw Error("selector picked a candidate whose inner safe set excludes the state");
        state.active_index = chosen;
        state.active_id = certified_.at(chosen).alpha.id();
        ++state.switch_count;
        state.last_switch_step = state.step;
    }
    state.last_margin = cascades_[chosen].eval_psi(x, nominal);
    ++state.step;
    return chosen;
}

} // namespace iccbf
