#pragma once

#include "iccbf/validator.hpp"

#include <cstddef>
#include <limits>

namespace iccbf {

struct CertifiedEntry {
    AlphaVector alpha;
    ValidationReport report;
};

// Offline-certified parameter vectors, stable-ordered by candidate id.
// Construction rejects anything not carrying a Certified verdict.
class CertifiedSet {
public:
    explicit CertifiedSet(std::vector<CertifiedEntry> entries);

    std::size_t size() const { return entries_.size(); }
    const CertifiedEntry& at(std::size_t index) const { return entries_.at(index); }

private:
    std::vector<CertifiedEntry> entries_;
};

struct AdaptState {
    std::size_t active_index = 0;
    std::string active_id;
    int switch_count = 0;
    double last_margin = std::numeric_limits<double>::quiet_NaN();
    int step = 0;              // selection calls so far
    int last_switch_step = 0;  // dwell bookkeeping
};

struct AdaptOptions {
    int dwell = 1;  // minimum steps between switches; 1 disables hysteresis
};

// Online selection among certified candidates: at each step, among candidates
// whose inner safe set contains the current state, pick the one with the
// largest nominal-control slack psi(x, u_nom). Switching away from the active
// candidate is allowed only into a set that contains the state, so the
// per-candidate invariance guarantee survives every switch.
class AdaptiveSelector {
public:
    // The model must outlive the selector.
    AdaptiveSelector(const SystemModel& model, CertifiedSet certified,
                     CascadeSettings settings = {}, AdaptOptions options = {});

    const CertifiedSet& certified() const { return certified_; }
    const BarrierCascade& cascade_for(std::size_t index) const { return cascades_.at(index); }
    const AdaptOptions& options() const { return options_; }

    // Fresh state with the first entry active.
    AdaptState initial_state() const;

    // Returns the index of the selected candidate and updates the state.
    // Throws NoAdmissibleCandidate when not even the active candidate's inner
    // safe set contains x.
    std::size_t select(AdaptState& state, const Vec& x, const Vec& u_nom) const;

private:
    CertifiedSet certified_;
    AdaptOptions options_;
    std::vector<BarrierCascade> cascades_;
};

} // namespace iccbf
