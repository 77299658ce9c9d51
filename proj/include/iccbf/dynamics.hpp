#pragma once

#include "iccbf/numeric.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace iccbf {

using StepFn = std::function<Vec(const Vec&, const Vec&)>;
using BarrierFn = std::function<double(const Vec&)>;

// Discrete-time system: deterministic next-state map, admissible input box,
// working state region and the base barrier h whose zero-superlevel set is
// the safe set. Immutable after construction; step and barrier are pure, so
// instances can be shared freely across threads.
class SystemModel {
public:
    SystemModel(std::string name, int state_dim, int input_dim, double dt, StepFn step_map,
                BarrierFn barrier, Box input_box, Box state_box);

    // f(x, u). Validates dimensions and that u lies in the input box
    // (tolerance 1e-9); rejects non-finite successors.
    Vec step(const Vec& x, const Vec& u) const;

    // h(x).
    double barrier(const Vec& x) const;

    int state_dim() const { return state_dim_; }
    int input_dim() const { return input_dim_; }
    double dt() const { return dt_; }
    const Box& input_box() const { return input_box_; }
    const Box& state_box() const { return state_box_; }
    const std::string& name() const { return name_; }

    // Override the working region the certification grid spans.
    void set_state_box(Box box);

private:
    std::string name_;
    int state_dim_ = 0;
    int input_dim_ = 0;
    double dt_ = 0.0;
    StepFn step_map_;
    BarrierFn barrier_;
    Box input_box_;
    Box state_box_;
};

// Finite surrogate for optimizing over the input box: Cartesian product of
// per-axis uniform grids, both endpoints of every axis included exactly.
struct InputGrid {
    std::vector<Vec> points;  // row-major over axes, axis 0 slowest
    int resolution = 0;       // points per axis
};

InputGrid input_grid(const SystemModel& model, int resolution);

// Point mass pushed along a line toward a wall at position `wall`:
// state (p, v), p' = p + dt*v, v' = v + dt*u, |u| <= u_max, h = wall - p.
SystemModel make_double_integrator(double dt, double u_max, double wall);

// Forward-Euler unicycle with a circular obstacle: state (x, y, theta),
// inputs (v, omega) with v in [0, v_max], |omega| <= omega_max,
// h = ||(x, y) - center||^2 - radius^2.
SystemModel make_unicycle(double dt, double v_max, double omega_max,
                          std::array<double, 2> obstacle_center, double obstacle_radius);

} // namespace iccbf
