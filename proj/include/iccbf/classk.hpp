#pragma once

#include <string>
#include <vector>

namespace iccbf {

enum class ClassKKind { Linear, Saturating };

// Parametric scalar class-K function with the contracted-decrease property
// alpha(z) < z for z > 0. Two families:
//   Linear      alpha(z) = gamma * z,            gamma in (0, 1)
//   Saturating  alpha(z) = scale * z / (1 + z/knee), scale in (0, 1), knee > 0
// Negative arguments use the odd-linear extension by the slope at zero, so
// evaluation is defined on all of R (set-membership checks reach b < 0).
//
// gamma == 1 is admitted only when the caller opts into exponential-CBF mode;
// such a function fails the strict contracted-decrease check and can only be
// used at recursion depth zero.
class ClassKFn {
public:
    static ClassKFn linear(double gamma, bool exponential_cbf_mode = false);
    static ClassKFn saturating(double scale, double knee);

    double eval(double z) const;

    ClassKKind kind() const { return kind_; }
    double slope_at_zero() const { return kind_ == ClassKKind::Linear ? gamma_ : scale_; }
    bool exponential_boundary() const { return kind_ == ClassKKind::Linear && gamma_ == 1.0; }

    // Linear only.
    double gamma() const { return gamma_; }
    // Saturating only.
    double scale() const { return scale_; }
    double knee() const { return knee_; }

private:
    ClassKFn() = default;

    ClassKKind kind_ = ClassKKind::Linear;
    double gamma_ = 0.0;
    double scale_ = 0.0;
    double knee_ = 0.0;
};

struct ClassKCheck {
    bool pass = false;
    double fail_z = 0.0;  // grid point where the check failed; meaningful iff !pass
    std::string reason;   // empty when pass
};

// Grid check of the class-K contract: alpha(0) = 0 within 1e-12, strictly
// increasing across the grid, and alpha(z) < z at every grid point z > 0.
// The grid must be sorted, non-negative and finite.
ClassKCheck check_classk(const ClassKFn& fn, const std::vector<double>& grid);

// Default grid used when admitting parameter vectors; spans (0, 1e6].
const std::vector<double>& standard_classk_grid();

} // namespace iccbf
