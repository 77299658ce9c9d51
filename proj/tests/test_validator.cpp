#include "doctest.h"

#include "iccbf/validator.hpp"

#include <cmath>

using namespace iccbf;

namespace {

ValidateOptions options_51() {
    ValidateOptions opt;
    opt.state_resolution = 51;
    opt.input_resolution = 11;
    return opt;
}

} // namespace

TEST_CASE("aggressive r=0 candidate is refuted with sound counterexamples") {
    const SystemModel model = make_double_integrator(0.1, 1.0, 10.0);
    const AlphaVector alpha({ClassKFn::linear(0.9)}, "g09");
    const ValidationReport report = validate(model, alpha, options_51());

    CHECK(report.verdict == Verdict::Refuted);
    CHECK(report.zeta_star < 0.0);
    CHECK(report.complete);
    REQUIRE_FALSE(report.counterexamples.empty());

    // Hand counterexample: near the wall at top speed the sup of
    // delta h + 0.9 h = -0.5 + 0.9*(10 - p) is negative.
    CHECK(report.worst_state[1] == doctest::Approx(5.0));
    CHECK(report.worst_state[0] > 9.0);

    // Every counterexample re-checks by direct cascade evaluation.
    const BarrierCascade cascade(model, alpha, CascadeSettings{11, true});
    for (const Vec& x : report.counterexamples) {
        CHECK(cascade.membership(x).in_c_star);
        double sup = -std::numeric_limits<double>::infinity();
        for (const Vec& u : cascade.inputs().points) sup = std::max(sup, cascade.eval_psi(x, u));
        CHECK(sup < 0.0);
    }
}

TEST_CASE("zeta_star is reproducible from the grid metadata") {
    const SystemModel model = make_double_integrator(0.1, 1.0, 10.0);
    const AlphaVector alpha({ClassKFn::linear(0.9)}, "g09");
    ValidateOptions opt = options_51();
    opt.state_resolution = 21;
    const ValidationReport report = validate(model, alpha, opt);

    const CartesianGrid grid =
        CartesianGrid::uniform(Box(report.grid.state_box), report.grid.state_resolution);
    REQUIRE(grid.size() == report.grid.state_points);
    const BarrierCascade cascade(model, alpha,
                                 CascadeSettings{report.grid.input_resolution, true});
    double zeta = std::numeric_limits<double>::infinity();
    std::uint64_t inside = 0;
    for (std::uint64_t i = 0; i < grid.size(); ++i) {
        const Vec x = grid.point(i);
        if (!cascade.membership(x).in_c_star) continue;
        ++inside;
        double sup = -std::numeric_limits<double>::infinity();
        for (const Vec& u : cascade.inputs().points) sup = std::max(sup, cascade.eval_psi(x, u));
        zeta = std::min(zeta, sup);
    }
    CHECK(inside == report.c_star_count);
    CHECK(zeta == report.zeta_star);  // exact reproduction
}

TEST_CASE("gentle depth-1 candidate certifies") {
    const SystemModel model = make_double_integrator(0.1, 1.0, 10.0);
    const AlphaVector alpha({ClassKFn::linear(0.02), ClassKFn::linear(0.1)}, "gentle");
    const ValidationReport report = validate(model, alpha, options_51());
    CHECK(report.verdict == Verdict::Certified);
    CHECK(report.zeta_star >= 0.0);
    CHECK(report.c_star_count > 0);
    CHECK(report.counterexamples.empty());

    // Brute-force oracle at double resolution agrees on the verdict.
    ValidateOptions fine = options_51();
    fine.state_resolution = 101;
    const ValidationReport fine_report = validate(model, alpha, fine);
    CHECK(fine_report.verdict == Verdict::Certified);
}

TEST_CASE("empty inner set yields the vacuous verdict") {
    SystemModel model = make_double_integrator(0.1, 1.0, 10.0);
    // Working region entirely beyond the wall: b_0 < 0 everywhere.
    model.set_state_box(Box({{11.0, 12.0}, {0.0, 5.0}}));
    const AlphaVector alpha({ClassKFn::linear(0.5)}, "g05");
    ValidateOptions opt = options_51();
    opt.state_resolution = 11;
    const ValidationReport report = validate(model, alpha, opt);
    CHECK(report.verdict == Verdict::VacuousEmptyCStar);
    CHECK(report.c_star_count == 0);
    CHECK(std::isnan(report.zeta_star));
    CHECK(report.counterexamples.empty());
}

TEST_CASE("serial and parallel paths agree to the last bit") {
    const SystemModel model = make_double_integrator(0.1, 1.0, 10.0);
    for (const AlphaVector& alpha :
         {AlphaVector({ClassKFn::linear(0.9)}, "refuted"),
          AlphaVector({ClassKFn::linear(0.02), ClassKFn::linear(0.1)}, "certified")}) {
        ValidateOptions opt = options_51();
        opt.state_resolution = 31;
        opt.parallel = false;
        const ValidationReport serial = validate_serial(model, alpha, opt);
        for (int threads : {1, 2, 4, 8}) {
            ValidateOptions par = opt;
            par.parallel = true;
            par.threads = threads;
            const ValidationReport parallel = validate_parallel(model, alpha, par);
            CHECK(parallel.verdict == serial.verdict);
            CHECK(parallel.zeta_star == serial.zeta_star);
            CHECK(parallel.worst_state == serial.worst_state);
            CHECK(parallel.counterexamples == serial.counterexamples);
            CHECK(parallel.c_star_count == serial.c_star_count);
        }
    }
}

TEST_CASE("evaluation budget stops deterministically with a partial report") {
    const SystemModel model = make_double_integrator(0.1, 1.0, 10.0);
    const AlphaVector alpha({ClassKFn::linear(0.9)}, "g09");
    ValidateOptions opt = options_51();
    opt.state_resolution = 21;
    opt.max_evals = 100;

    ValidationReport partial;
    try {
        validate(model, alpha, opt);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        partial = e.partial();
    }
    CHECK_FALSE(partial.complete);
    CHECK(partial.states_evaluated == 100);
    CHECK(partial.grid.state_points == 441);

    // Same budget, different thread counts: identical partial progress.
    for (int threads : {1, 3}) {
        ValidateOptions again = opt;
        again.threads = threads;
        try {
            validate(model, alpha, again);
            FAIL("expected BudgetExceeded");
        } catch (const BudgetExceeded& e) {
            CHECK(e.partial().states_evaluated == partial.states_evaluated);
            CHECK(e.partial().c_star_count == partial.c_star_count);
        }
    }
}

TEST_CASE("certify_candidates keeps order and isolates failures") {
    const SystemModel model = make_double_integrator(0.1, 1.0, 10.0);
    const std::vector<AlphaVector> candidates = {
        AlphaVector({ClassKFn::linear(0.02), ClassKFn::linear(0.1)}, "good"),
        AlphaVector({ClassKFn::linear(0.9), ClassKFn::linear(0.9)}, "bad"),
        AlphaVector({ClassKFn::linear(0.02), ClassKFn::linear(0.1)}, "good-again"),
    };
    ValidateOptions opt = options_51();
    opt.state_resolution = 21;
    const std::vector<CandidateReport> reports = certify_candidates(model, candidates, opt);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].alpha.id() == "good");
    CHECK(reports[0].report.verdict == Verdict::Certified);
    CHECK(reports[1].report.verdict == Verdict::Refuted);
    CHECK(reports[2].report.verdict == Verdict::Certified);

    // Duplicates get identical reports.
    CHECK(reports[0].report.zeta_star == reports[2].report.zeta_star);
    CHECK(reports[0].report.c_star_count == reports[2].report.c_star_count);

    // A budget-limited candidate lands in the paired report, batch continues.
    ValidateOptions tight = opt;
    tight.max_evals = 10;
    const std::vector<CandidateReport> limited = certify_candidates(model, candidates, tight);
    REQUIRE(limited.size() == 3);
    for (const CandidateReport& r : limited) {
        CHECK_FALSE(r.error.empty());
        CHECK_FALSE(r.report.complete);
    }
}

TEST_CASE("validator rejects degenerate configurations") {
    const SystemModel model = make_double_integrator(0.1, 1.0, 10.0);
    const AlphaVector alpha({ClassKFn::linear(0.5)}, "g05");
    ValidateOptions opt;
    opt.state_resolution = 1;
    CHECK_THROWS_AS(validate(model, alpha, opt), ResolutionTooSmall);
    CHECK_THROWS_AS(certify_candidates(model, {}, options_51()), EmptyGrid);
}
