#pragma once

#include "iccbf/cascade.hpp"

namespace iccbf {

struct FilterResult {
    Vec u_safe;
    double psi_value = 0.0;     // psi at u_safe; >= 0 on every return
    bool modified = false;      // u_safe differs from the nominal beyond 1e-12
    int feasible_count = 0;     // grid inputs with psi >= 0
    bool nominal_clamped = false;  // nominal lay outside the input box
};

struct FilterOptions {
    bool refine = false;        // 1-D bisection toward the feasibility boundary
    double refine_tol = 1e-6;   // bisection interval width
};

// Minimally invasive projection of the nominal input onto
// {u in U : psi(x, u) >= 0}: among feasible grid inputs, the one closest to
// u_nom in the Euclidean norm, ties broken by smaller norm then lexicographic
// order. With refine set and a scalar input, a bisection between the chosen
// grid point and the nominal sharpens the result toward the constraint
// boundary. Throws InfeasibleAtState when no grid input is feasible.
FilterResult safe_control(const BarrierCascade& cascade, const Vec& x, const Vec& u_nom,
                          const FilterOptions& options = {});

} // namespace iccbf
