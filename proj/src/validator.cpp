#include "iccbf/validator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace iccbf {

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Certified: return "Certified";
    case Verdict::Refuted: return "Refuted";
    case Verdict::VacuousEmptyCStar: return "VacuousEmptyCStar";
    }
    return "Unknown";
}

namespace {

struct StateResult {
    double sup = 0.0;
    bool in_c_star = false;
};

// sup over the input grid of psi(x, u) = max_u b_r(f(x,u)) - b_r(x) + alpha_r(b_r(x)).
double sup_psi(const BarrierCascade& cascade, const Vec& x) {
    const int r = cascade.depth();
    double max_next = -std::numeric_limits<double>::infinity();
    for (const Vec& u : cascade.inputs().points) {
        const double b_next = cascade.eval_b(cascade.model().step(x, u), r);
        if (b_next > max_next) max_next = b_next;
    }
    const double b_here = cascade.eval_b(x, r);
    return (max_next - b_here) + cascade.alpha().at(r).eval(b_here);
}

void check_state_box(const SystemModel& model) {
    const Box& box = model.state_box();
    if (box.dim() == 0) throw EmptyStateBox("state box is empty");
    for (std::size_t i = 0; i < box.dim(); ++i)
        if (!(box.hi(i) >= box.lo(i))) throw EmptyStateBox("state box axis has no extent");
}

StateResult evaluate_state(const BarrierCascade& cascade, const Vec& x) {
    StateResult res;
    res.in_c_star = cascade.membership(x).in_c_star;
    if (res.in_c_star) res.sup = sup_psi(cascade, x);
    return res;
}

// Deterministic assembly: reduce the per-state results in row-major order.
ValidationReport reduce_results(const SystemModel& model, const AlphaVector& alpha,
                                const ValidateOptions& options, const CartesianGrid& grid,
                                const std::vector<StateResult>& results,
                                std::uint64_t states_evaluated) {
    ValidationReport report;
    report.alpha_id = alpha.id();
    report.grid.state_resolution = options.state_resolution;
    report.grid.input_resolution = options.input_resolution;
    report.grid.state_points = grid.size();
    report.grid.state_box = model.state_box().axes();
    report.states_evaluated = states_evaluated;
    report.complete = states_evaluated == grid.size();

    double zeta = std::numeric_limits<double>::infinity();
    std::uint64_t worst_index = 0;
    std::uint64_t c_star_count = 0;
    for (std::uint64_t i = 0; i < states_evaluated; ++i) {
        const StateResult& r = results[static_cast<std::size_t>(i)];
        if (!r.in_c_star) continue;
        ++c_star_count;
        if (r.sup < zeta) {
            zeta = r.sup;
            worst_index = i;
        }
        if (r.sup < 0.0) report.counterexamples.push_back(grid.point(i));
    }
    report.c_star_count = c_star_count;

    if (c_star_count == 0) {
        report.verdict = Verdict::VacuousEmptyCStar;
        report.zeta_star = std::numeric_limits<double>::quiet_NaN();
    } else {
        report.zeta_star = zeta;
        report.worst_state = grid.point(worst_index);
        report.verdict = zeta >= 0.0 ? Verdict::Certified : Verdict::Refuted;
    }
    return report;
}

ValidationReport run_validation(const SystemModel& model, const AlphaVector& alpha,
                                const ValidateOptions& options, bool parallel) {
    if (options.state_resolution < 2 || options.input_resolution < 2)
        throw ResolutionTooSmall("validation resolutions must be at least 2");
    check_state_box(model);

    const CartesianGrid grid = CartesianGrid::uniform(model.state_box(), options.state_resolution);
    const std::uint64_t total = grid.size();
    const std::uint64_t budget =
        options.max_evals == 0 ? total : std::min<std::uint64_t>(options.max_evals, total);

    const CascadeSettings settings{options.input_resolution, options.use_cache};
    std::vector<StateResult> results(static_cast<std::size_t>(budget));

    if (!parallel) {
        BarrierCascade cascade(model, alpha, settings);
        for (std::uint64_t i = 0; i < budget; ++i)
            results[static_cast<std::size_t>(i)] = evaluate_state(cascade, grid.point(i));
    } else {
#ifdef _OPENMP
        int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
        threads = std::max(threads, 1);
        const std::int64_t n = static_cast<std::int64_t>(budget);
#pragma omp parallel num_threads(threads)
        {
            // One cascade (and memo cache) per worker; values are pure and land
            // in per-index slots, so the outcome is independent of the
            // schedule. Dynamic chunks balance the uneven membership work.
            BarrierCascade cascade(model, alpha, settings);
            Vec x;
#pragma omp for schedule(dynamic, 64)
            for (std::int64_t i = 0; i < n; ++i) {
                grid.point_into(static_cast<std::uint64_t>(i), x);
                results[static_cast<std::size_t>(i)] = evaluate_state(cascade, x);
            }
        }
#else
        BarrierCascade cascade(model, alpha, settings);
        for (std::uint64_t i = 0; i < budget; ++i)
            results[static_cast<std::size_t>(i)] = evaluate_state(cascade, grid.point(i));
#endif
    }

    ValidationReport report = reduce_results(model, alpha, options, grid, results, budget);
    if (!report.complete)
        throw BudgetExceeded("validation budget of " + std::to_string(options.max_evals) +
                                 " state evaluations exhausted after " + std::to_string(budget) +
                                 " of " + std::to_string(total) + " grid points",
                             std::move(report));
    return report;
}

} // namespace

ValidationReport validate_serial(const SystemModel& model, const AlphaVector& alpha,
                                 const ValidateOptions& options) {
    return run_validation(model, alpha, options, false);
}

ValidationReport validate_parallel(const SystemModel& model, const AlphaVector& alpha,
                                   const ValidateOptions& options) {
    return run_validation(model, alpha, options, true);
}

ValidationReport validate(const SystemModel& model, const AlphaVector& alpha,
                          const ValidateOptions& options) {
    return run_validation(model, alpha, options, options.parallel);
}

std::vector<CandidateReport> certify_candidates(const SystemModel& model,
                                                const std::vector<AlphaVector>& candidates,
                                                const ValidateOptions& options) {
    if (candidates.empty()) throw EmptyGrid("candidate list is empty");
    std::vector<CandidateReport> out;
    out.reserve(candidates.size());
    for (const AlphaVector& alpha : candidates) {
        try {
            out.push_back({alpha, validate(model, alpha, options), ""});
        } catch (const BudgetExceeded& e) {
            out.push_back({alpha, e.partial(), e.what()});
        } catch (const Error& e) {
            ValidationReport empty;
            empty.alpha_id = alpha.id();
            out.push_back({alpha, std::move(empty), e.what()});
        }
    }
    return out;
}

} // namespace iccbf
