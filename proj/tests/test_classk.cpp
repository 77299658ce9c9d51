#include "doctest.h"

#include "iccbf/classk.hpp"
#include "iccbf/errors.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace iccbf;

TEST_CASE("linear class-K evaluation") {
    const ClassKFn fn = ClassKFn::linear(0.5);
    CHECK(fn.eval(10.0) == doctest::Approx(5.0));
    CHECK(fn.eval(0.0) == 0.0);
    CHECK(fn.eval(-2.0) == doctest::Approx(-1.0));  // odd-linear extension is exact

    const ClassKFn g03 = ClassKFn::linear(0.3);
    CHECK(g03.eval(2.0) == doctest::Approx(0.6));
    CHECK(g03.eval(-2.0) == doctest::Approx(-0.6));
}

TEST_CASE("linear constructor rejects out-of-range coefficients") {
    CHECK_THROWS_AS(ClassKFn::linear(1.1), OutOfRange);
    CHECK_THROWS_AS(ClassKFn::linear(0.0), OutOfRange);
    CHECK_THROWS_AS(ClassKFn::linear(-0.5), OutOfRange);
    // Coefficient 1 needs the explicit exponential-CBF opt-in.
    CHECK_THROWS_AS(ClassKFn::linear(1.0), OutOfRange);
    const ClassKFn boundary = ClassKFn::linear(1.0, true);
    CHECK(boundary.exponential_boundary());
    CHECK(boundary.eval(3.0) == 3.0);
}

TEST_CASE("saturating closed form") {
    const ClassKFn fn = ClassKFn::saturating(0.5, 4.0);
    // 0.5 * 4 / (1 + 4/4) = 1
    CHECK(fn.eval(4.0) == doctest::Approx(1.0));
    CHECK(fn.eval(0.0) == 0.0);
    CHECK(fn.eval(-2.0) == doctest::Approx(-1.0));  // slope-at-zero extension

    CHECK_THROWS_AS(ClassKFn::saturating(1.0, 4.0), OutOfRange);
    CHECK_THROWS_AS(ClassKFn::saturating(0.5, 0.0), OutOfRange);
    CHECK_THROWS_AS(ClassKFn::saturating(0.0, 1.0), OutOfRange);
}

TEST_CASE("eval rejects non-finite arguments") {
    const ClassKFn fn = ClassKFn::linear(0.5);
    CHECK_THROWS_AS(fn.eval(std::nan("")), NonFinite);
    CHECK_THROWS_AS(fn.eval(std::numeric_limits<double>::infinity()), NonFinite);
}

TEST_CASE("check_classk verdicts") {
    CHECK(check_classk(ClassKFn::linear(0.5), {0.0, 1.0, 2.0}).pass);

    const ClassKCheck fail = check_classk(ClassKFn::linear(1.0, true), {0.0, 1.0});
    CHECK_FALSE(fail.pass);
    CHECK(fail.fail_z == 1.0);  // alpha(1) = 1 is not < 1

    CHECK(check_classk(ClassKFn::saturating(0.9, 1.0), {0.0, 0.5, 1.0, 10.0}).pass);

    CHECK_THROWS_AS(check_classk(ClassKFn::linear(0.5), {}), EmptyGrid);
    CHECK_THROWS_AS(check_classk(ClassKFn::linear(0.5), {1.0, 0.5}), OutOfRange);
    CHECK_THROWS_AS(check_classk(ClassKFn::linear(0.5), {-1.0, 0.5}), OutOfRange);
}

TEST_CASE("contract properties on sampled points") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> mag(-6.0, 6.0);  // log10 z over (1e-6, 1e6)
    const std::vector<ClassKFn> fns = {ClassKFn::linear(0.02), ClassKFn::linear(0.97),
                                       ClassKFn::saturating(0.5, 4.0),
                                       ClassKFn::saturating(0.99, 0.01)};
    for (const ClassKFn& fn : fns) {
        for (int i = 0; i < 2000; ++i) {
            const double z = std::pow(10.0, mag(rng));
            const double v = fn.eval(z);
            CHECK(v < z);
            CHECK(v > 0.0);
        }
        // Monotonicity on ordered pairs.
        for (int i = 0; i < 500; ++i) {
            double z1 = std::pow(10.0, mag(rng));
            double z2 = std::pow(10.0, mag(rng));
            if (z1 == z2) continue;
            if (z1 > z2) std::swap(z1, z2);
            CHECK(fn.eval(z1) < fn.eval(z2));
        }
        // Continuity at zero and the negative-side extension.
        CHECK(fn.eval(0.0) == 0.0);
        CHECK(fn.eval(1e-12) == doctest::Approx(fn.slope_at_zero() * 1e-12).epsilon(1e-6));
        for (double z : {0.5, 2.0, 100.0})
            CHECK(fn.eval(-z) == doctest::Approx(-fn.slope_at_zero() * z));
        CHECK(check_classk(fn, standard_classk_grid()).pass);
    }
}
