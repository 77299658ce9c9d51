#pragma once

#include "iccbf/cascade.hpp"
#include "iccbf/errors.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace iccbf {

enum class Verdict { Certified, Refuted, VacuousEmptyCStar };

std::string to_string(Verdict v);

struct GridMeta {
    int state_resolution = 0;
    int input_resolution = 0;
    std::uint64_t state_points = 0;
    std::vector<std::array<double, 2>> state_box;
};

// Outcome of the min-sup certification sweep. A Certified verdict is grid
// evidence, not a proof: the sweep can refute a candidate outright, but
// certification only says no grid counterexample exists at this resolution.
struct ValidationReport {
    Verdict verdict = Verdict::VacuousEmptyCStar;
    double zeta_star = 0.0;  // min over grid states in C* of the per-state sup; NaN when vacuous
    Vec worst_state;         // first grid point (row-major) attaining zeta_star
    std::vector<Vec> counterexamples;  // grid states in C* whose sup is negative
    std::uint64_t c_star_count = 0;    // grid points inside C*
    GridMeta grid;
    std::uint64_t states_evaluated = 0;
    bool complete = false;  // false when the evaluation budget cut the sweep short
    std::string alpha_id;
};

// Thrown when the evaluation budget runs out; carries the progress made.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& msg, ValidationReport partial)
        : Error(msg), partial_(std::move(partial)) {}
    const ValidationReport& partial() const { return partial_; }

private:
    ValidationReport partial_;
};

struct ValidateOptions {
    int state_resolution = 21;
    int input_resolution = 11;
    std::uint64_t max_evals = 0;  // budget in state-grid points; 0 = unlimited
    int threads = 0;              // worker cap for the parallel path; 0 = all available
    bool parallel = true;         // false forces the serial reference path
    bool use_cache = true;
};

// Certify or refute a candidate parameter vector by brute-force evaluation of
// the min-sup problem over the state grid restricted to the inner safe set.
// Results are identical, to the last bit, between the serial and parallel
// paths and across thread counts.
ValidationReport validate(const SystemModel& model, const AlphaVector& alpha,
                          const ValidateOptions& options = {});

// Serial reference implementation.
ValidationReport validate_serial(const SystemModel& model, const AlphaVector& alpha,
                                 const ValidateOptions& options = {});

// OpenMP kernel: per-state work runs in parallel, the min-reduction is done
// serially in row-major index order.
ValidationReport validate_parallel(const SystemModel& model, const AlphaVector& alpha,
                                   const ValidateOptions& options = {});

struct CandidateReport {
    AlphaVector alpha;
    ValidationReport report;
    std::string error;  // non-empty when validation aborted (budget exhaustion etc.)
};

// Validates each candidate independently, order preserved; per-candidate
// failures land in the paired report instead of aborting the batch.
std::vector<CandidateReport> certify_candidates(const SystemModel& model,
                                                const std::vector<AlphaVector>& candidates,
                                                const ValidateOptions& options = {});

} // namespace iccbf
