#include "iccbf/dynamics.hpp"

#include "iccbf/errors.hpp"

#include <cmath>
#include <utility>

namespace iccbf {

namespace {
constexpr double kInputTol = 1e-9;
}

SystemModel::SystemModel(std::string name, int state_dim, int input_dim, double dt, StepFn step_map,
                         BarrierFn barrier, Box input_box, Box state_box)
    : name_(std::move(name)),
      state_dim_(state_dim),
      input_dim_(input_dim),
      dt_(dt),
      step_map_(std::move(step_map)),
      barrier_(std::move(barrier)),
      input_box_(std::move(input_box)),
      state_box_(std::move(state_box)) {
    if (state_dim_ <= 0 || input_dim_ <= 0)
        throw OutOfRange("system dimensions must be positive");
    if (input_box_.dim() != static_cast<std::size_t>(input_dim_))
        throw DimensionMismatch("input box dimension does not match input_dim");
    if (state_box_.dim() != static_cast<std::size_t>(state_dim_))
        throw DimensionMismatch("state box dimension does not match state_dim");
    if (!step_map_ || !barrier_) throw Error("system model requires step map and barrier");
}

Vec SystemModel::step(const Vec& x, const Vec& u) const {
    if (x.size() != static_cast<std::size_t>(state_dim_))
        throw DimensionMismatch("state has dimension " + std::to_string(x.size()) + ", expected " +
                                std::to_string(state_dim_));
    if (u.size() != static_cast<std::size_t>(input_dim_))
        throw DimensionMismatch("input has dimension " + std::to_string(u.size()) + ", expected " +
                                std::to_string(input_dim_));
    if (!input_box_.contains(u, kInputTol))
        throw InputOutOfBounds("input lies outside the admissible box");
    Vec next = step_map_(x, u);
    if (next.size() != static_cast<std::size_t>(state_dim_))
        throw DimensionMismatch("step map returned a state of wrong dimension");
    if (!all_finite(next)) throw NonFiniteState("step map produced a non-finite state");
    return next;
}

double SystemModel::barrier(const Vec& x) const {
    if (x.size() != static_cast<std::size_t>(state_dim_))
        throw DimensionMismatch("state has dimension " + std::to_string(x.size()) + ", expected " +
                                std::to_string(state_dim_));
    return barrier_(x);
}

void SystemModel::set_state_box(Box box) {
    if (box.dim() != static_cast<std::size_t>(state_dim_))
        throw DimensionMismatch("state box dimension does not match state_dim");
    state_box_ = std::move(box);
}

InputGrid input_grid(const SystemModel& model, int resolution) {
    if (resolution < 2) throw ResolutionTooSmall("input grid resolution must be at least 2");
    const CartesianGrid grid = CartesianGrid::uniform(model.input_box(), resolution);
    InputGrid out;
    out.resolution = resolution;
    out.points.reserve(static_cast<std::size_t>(grid.size()));
    for (std::uint64_t i = 0; i < grid.size(); ++i) out.points.push_back(grid.point(i));
    return out;
}

SystemModel make_double_integrator(double dt, double u_max, double wall) {
    if (!(dt > 0.0)) throw OutOfRange("dt must be positive");
    if (!(u_max > 0.0)) throw OutOfRange("u_max must be positive");
    StepFn step = [dt](const Vec& x, const Vec& u) -> Vec {
        return {x[0] + dt * x[1], x[1] + dt * u[0]};
    };
    BarrierFn barrier = [wall](const Vec& x) -> double { return wall - x[0]; };
    Box input_box({{-u_max, u_max}});
    // Default working region: from the origin to the wall, non-negative speeds.
    Box state_box({{0.0, wall}, {0.0, 5.0}});
    return SystemModel("double_integrator", 2, 1, dt, std::move(step), std::move(barrier),
                       std::move(input_box), std::move(state_box));
}

SystemModel make_unicycle(double dt, double v_max, double omega_max,
                          std::array<double, 2> obstacle_center, double obstacle_radius) {
    if (!(dt > 0.0)) throw OutOfRange("dt must be positive");
    if (!(v_max > 0.0) || !(omega_max > 0.0)) throw OutOfRange("input bounds must be positive");
    if (!(obstacle_radius > 0.0)) throw OutOfRange("obstacle radius must be positive");
    const double cx = obstacle_center[0];
    const double cy = obstacle_center[1];
    StepFn step = [dt](const Vec& x, const Vec& u) -> Vec {
        return {x[0] + dt * u[0] * std::cos(x[2]), x[1] + dt * u[0] * std::sin(x[2]),
                x[2] + dt * u[1]};
    };
    BarrierFn barrier = [cx, cy, obstacle_radius](const Vec& x) -> double {
        const double dx = x[0] - cx;
        const double dy = x[1] - cy;
        return dx * dx + dy * dy - obstacle_radius * obstacle_radius;
    };
    Box input_box({{0.0, v_max}, {-omega_max, omega_max}});
    const double reach = 5.0 * obstacle_radius;
    Box state_box({{cx - reach, cx + reach}, {cy - reach, cy + reach}, {-M_PI, M_PI}});
    return SystemModel("unicycle", 3, 2, dt, std::move(step), std::move(barrier),
                       std::move(input_box), std::move(state_box));
}

} // namespace iccbf
