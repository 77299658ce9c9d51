#include "iccbf/classk.hpp"

#include "iccbf/errors.hpp"

#include <cmath>

namespace iccbf {

ClassKFn ClassKFn::linear(double gamma, bool exponential_cbf_mode) {
    if (!std::isfinite(gamma)) throw NonFinite("linear class-K coefficient is not finite");
    if (gamma <= 0.0 || gamma > 1.0)
        throw OutOfRange("linear class-K coefficient must lie in (0, 1], got " + std::to_string(gamma));
    if (gamma == 1.0 && !exponential_cbf_mode)
        throw OutOfRange("coefficient 1 requires exponential-CBF mode");
    ClassKFn fn;
    fn.kind_ = ClassKKind::Linear;
    fn.gamma_ = gamma;
    return fn;
}

ClassKFn ClassKFn::saturating(double scale, double knee) {
    if (!std::isfinite(scale) || !std::isfinite(knee))
        throw NonFinite("saturating class-K parameters are not finite");
    if (scale <= 0.0 || scale >= 1.0)
        throw OutOfRange("saturating scale must lie in (0, 1), got " + std::to_string(scale));
    if (knee <= 0.0)
        throw OutOfRange("saturating knee must be positive, got " + std::to_string(knee));
    ClassKFn fn;
    fn.kind_ = ClassKKind::Saturating;
    fn.scale_ = scale;
    fn.knee_ = knee;
    return fn;
}

double ClassKFn::eval(double z) const {
    if (!std::isfinite(z)) throw NonFinite("class-K argument is not finite");
    switch (kind_) {
    case ClassKKind::Linear:
        return gamma_ * z;
    case ClassKKind::Saturating:
        if (z < 0.0) return scale_ * z;  // odd-linear extension by the slope at zero
        return scale_ * z / (1.0 + z / knee_);
    }
    throw Error("unreachable class-K kind");
}

ClassKCheck check_classk(const ClassKFn& fn, const std::vector<double>& grid) {
    if (grid.empty()) throw EmptyGrid("class-K check grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw NonFinite("class-K check grid has a non-finite point");
        if (grid[i] < 0.0) throw OutOfRange("class-K check grid must be non-negative");
        if (i > 0 && grid[i] <= grid[i - 1]) throw OutOfRange("class-K check grid must be strictly sorted");
    }

    ClassKCheck result;
    const double at_zero = fn.eval(0.0);
    if (std::abs(at_zero) > 1e-12) {
        result.fail_z = 0.0;
        result.reason = "alpha(0) = " + std::to_string(at_zero) + " is not 0";
        return result;
    }

    double prev_z = 0.0;
    double prev_v = at_zero;
    bool have_prev = true;
    for (double z : grid) {
        const double v = fn.eval(z);
        if (z > 0.0 && v >= z) {
            result.fail_z = z;
            result.reason = "alpha(z) >= z at z = " + std::to_string(z);
            return result;
        }
        if (have_prev && z > prev_z && v <= prev_v) {
            result.fail_z = z;
            result.reason = "not strictly increasing at z = " + std::to_string(z);
            return result;
        }
        if (z > prev_z || !have_prev) {
            prev_z = z;
            prev_v = v;
            have_prev = true;
        }
    }
    result.pass = true;
    return result;
}

const std::vector<double>& standard_classk_grid() {
    static const std::vector<double> grid = {0.0,   1e-9, 1e-6, 1e-3, 0.01, 0.1, 0.5, 1.0,
                                             2.0,   5.0,  10.0, 50.0, 100.0, 1e3, 1e4, 1e5,
                                             1e6};
    return grid;
}

} // namespace iccbf
