#include "iccbf/filter.hpp"

#include "iccbf/errors.hpp"

#include <cmath>

namespace iccbf {

namespace {

constexpr double kModifiedTol = 1e-12;

// Exact lexicographic comparison used only to break distance ties.
bool lex_less(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

bool modified_beyond_tol(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > kModifiedTol) return true;
    return false;
}

} // namespace

FilterResult safe_control(const BarrierCascade& cascade, const Vec& x, const Vec& u_nom,
                          const FilterOptions& options) {
    const SystemModel& model = cascade.model();
    if (!all_finite(x)) throw NonFiniteState("safe_control queried at a non-finite state");
    if (u_nom.size() != static_cast<std::size_t>(model.input_dim()))
        throw DimensionMismatch("nominal input has wrong dimension");

    FilterResult result;
    Vec nominal = u_nom;
    if (!model.input_box().contains(nominal, 1e-9)) {
        nominal = model.input_box().clamp(nominal);
        result.nominal_clamped = true;
    }

    // Grid pass: feasibility census plus the closest feasible grid point.
    bool have_best = false;
    Vec best;
    double best_dist = 0.0;
    double best_norm = 0.0;
    for (const Vec& u : cascade.inputs().points) {
        const double psi = cascade.eval_psi(x, u);
        if (psi < 0.0) continue;
        ++result.feasible_count;
        const double dist = squared_distance(u, nominal);
        double norm = 0.0;
        for (double c : u) norm += c * c;
        const bool better = !have_best || dist < best_dist ||
                            (dist == best_dist &&
                             (norm < best_norm || (norm == best_norm && lex_less(u, best))));
        if (better) {
            best = u;
            best_dist = dist;
            best_norm = norm;
            have_best = true;
        }
    }
    if (!have_best)
        throw InfeasibleAtState("no grid input satisfies psi >= 0 at this state");

    // The nominal itself wins whenever it is feasible, so an unconstrained
    // projection is the identity and filtering is idempotent.
    const double psi_nominal = cascade.eval_psi(x, nominal);
    if (psi_nominal >= 0.0) {
        result.u_safe = nominal;
        result.psi_value = psi_nominal;
        result.modified = modified_beyond_tol(nominal, u_nom);
        return result;
    }

    result.u_safe = best;
    result.psi_value = cascade.eval_psi(x, best);

    if (options.refine && model.input_dim() == 1) {
        // Scalar input: bisect between the feasible grid point and the
        // infeasible nominal, keeping the feasible side.
        double lo = best[0];       // psi >= 0
        double hi = nominal[0];    // psi < 0
        while (std::abs(hi - lo) > options.refine_tol) {
            const double mid = 0.5 * (lo + hi);
            if (cascade.eval_psi(x, Vec{mid}) >= 0.0)
                lo = mid;
            else
                hi = mid;
        }
        result.u_safe = Vec{lo};
        result.psi_value = cascade.eval_psi(x, result.u_safe);
    }

    if (!(result.psi_value >= 0.0))
        throw Error("safety filter produced an input with negative psi");
    result.modified = modified_beyond_tol(result.u_safe, u_nom);
    return result;
}

} // namespace iccbf
