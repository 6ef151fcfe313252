#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "corrfit/fixtures.hpp"
#include "corrfit/metrics.hpp"
#include "corrfit/optimizer.hpp"
#include "test_support.hpp"

using namespace corrfit;
using corrfit::testing::random_angles;
using corrfit::testing::random_instance;
using corrfit::testing::verify_trace;

TEST_CASE("first direction is steepest descent") {
    Vector g(2);
    g << 1.0, -2.0;
    const Vector d = search_direction(g, nullptr, nullptr, 0);
    CHECK(d(0) == -1.0);
    CHECK(d(1) == 2.0);
}

TEST_CASE("unit Fletcher-Reeves coefficient adds the previous direction") {
    Vector g(2), d_prev(2);
    g << 1.0, 0.0;
    d_prev << -1.0, 0.0;
    const Vector d = search_direction(g, &g, &d_prev, 1);
    CHECK(d(0) == -2.0);
    CHECK(d(1) == 0.0);
}

TEST_CASE("direction update matches the direct formula") {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 20; ++trial) {
        Vector g(6), g_prev(6), d_prev(6);
        for (Index i = 0; i < 6; ++i) {
            g(i) = gauss(rng);
            g_prev(i) = gauss(rng);
            d_prev(i) = gauss(rng);
        }
        DirectionOptions opt;
        opt.descent_safeguard = false;
        const Vector d = search_direction(g, &g_prev, &d_prev, 3, opt);
        const Vector expected = -g + (g.squaredNorm() / g_prev.squaredNorm()) * d_prev;
        REQUIRE((d - expected).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("zero previous gradient with nonzero current is degenerate") {
    Vector g(2), zero = Vector::Zero(2), d_prev(2);
    g << 1.0, 1.0;
    d_prev << -1.0, 0.0;
    CHECK_THROWS_AS(search_direction(g, &zero, &d_prev, 2), DegenerateGradient);
}

TEST_CASE("scheduled restarts and the descent safeguard return steepest descent") {
    Vector g(2), g_prev(2), d_prev(2);
    g << 1.0, 0.0;
    g_prev << 0.1, 0.0;
    d_prev << 1.0, 0.0; // uphill: FR update gives d'g > 0

    DirectionOptions guarded;
    CHECK(search_direction(g, &g_prev, &d_prev, 4, guarded) == -g);

    DirectionOptions unguarded;
    unguarded.descent_safeguard = false;
    const Vector raw = search_direction(g, &g_prev, &d_prev, 4, unguarded);
    CHECK(raw(0) == Catch::Approx(99.0));

    DirectionOptions periodic;
    periodic.restart_period = 4;
    d_prev << -5.0, 0.0;
    CHECK(search_direction(g, &g_prev, &d_prev, 4, periodic) == -g);
    CHECK(search_direction(g, &g_prev, &d_prev, 5, periodic) != -g);
}

namespace {
// 1-D quadratic f(x) = x^2 as a vector-space objective.
double quad_value(const Vector& x) { return x(0) * x(0); }
Vector quad_grad(const Vector& x) {
    Vector g(1);
    g(0) = 2.0 * x(0);
    return g;
}
} // namespace

TEST_CASE("backtracking on x^2 from x=1 halves the step once") {
    SolverConfig config;
    config.rho = 0.5;
    config.delta = 0.1;
    config.sigma = 0.4;
    Vector x(1), d(1), g(1);
    x << 1.0;
    d << -2.0;
    g << 2.0;
    const LineSearchOutcome out =
        strong_wolfe_backtrack(quad_value, quad_grad, x, d, g, quad_value(x), config);
    REQUIRE(out.accepted);
    CHECK(out.m_t == 1);
    CHECK(out.beta_t == 0.5);
    CHECK(out.f_new == 0.0);
    CHECK(out.x_new(0) == 0.0);
}

TEST_CASE("full step is accepted when it lands on the minimizer") {
    SolverConfig config;
    config.rho = 0.5;
    Vector x(1), d(1), g(1);
    x << 1.0;
    d << -1.0;
    g << 2.0;
    const LineSearchOutcome out =
        strong_wolfe_backtrack(quad_value, quad_grad, x, d, g, quad_value(x), config);
    REQUIRE(out.accepted);
    CHECK(out.m_t == 0);
    CHECK(out.beta_t == 1.0);
}

TEST_CASE("line search reports failure when no step satisfies curvature") {
    // On a linear function the slope never flattens, so the curvature
    // condition rejects every backtracked step.
    auto value = [](const Vector& x) { return 3.0 * x(0); };
    auto grad = [](const Vector&) {
        Vector g(1);
        g(0) = 3.0;
        return g;
    };
    SolverConfig config;
    config.max_backtrack = 10;
    Vector x(1), d(1), g(1);
    x << 0.0;
    d << -1.0;
    g << 3.0;
    const LineSearchOutcome out = strong_wolfe_backtrack(value, grad, x, d, g, 0.0, config);
    CHECK_FALSE(out.accepted);
    CHECK(out.m_t == config.max_backtrack);
}

TEST_CASE("solve reproduces the example31 rank-3 reference run") {
    const ProblemInstance inst = load_fixture("example31", 3);
    SolverConfig config;
    config.init_angles = fixture_initial_angles("example31", 3);
    const SolveReport report = solve(inst, config);

    CHECK(report.termination == Termination::converged);
    CHECK(report.trace.back().grad_norm < 1e-4);
    CHECK(report.iterations <= 100);
    const double err = relative_residual(inst, report.final_corr);
    CHECK(err == Catch::Approx(0.0092).margin(1e-3));
    const Matrix ref = *fixture_reference_solution("example31", 3);
    CHECK((report.final_corr.entries() - ref).cwiseAbs().maxCoeff() < 5e-3);
    CHECK_FALSE(verify_trace(inst, config, report).has_value());
}

TEST_CASE("solve reproduces the example31 rank-2 reference run") {
    const ProblemInstance inst = load_fixture("example31", 2);
    SolverConfig config;
    config.init_angles = fixture_initial_angles("example31", 2);
    const SolveReport report = solve(inst, config);

    CHECK(report.termination == Termination::converged);
    const double err = relative_residual(inst, report.final_corr);
    CHECK(err == Catch::Approx(0.5111).margin(5e-3));
    const Matrix ref = *fixture_reference_solution("example31", 2);
    CHECK((report.final_corr.entries() - ref).cwiseAbs().maxCoeff() < 1e-2);
}

TEST_CASE("solve drives a reachable global minimum to zero") {
    // The minimum set of this instance is degenerate (a curve of exact
    // fits), which the ratio-0.8 step grid resolves poorly; a finer
    // backtracking ratio reaches it.
    const ProblemInstance inst = validate_problem({Matrix::Ones(3, 3)}, 2);
    SolverConfig config;
    config.rho = 0.95;
    Matrix start(3, 1);
    start << 0.4, 1.1, -0.3; // no sin equal to +-1
    config.init_angles = AngleMatrix(start);
    const SolveReport report = solve(inst, config);
    CHECK(report.termination == Termination::converged);
    CHECK(report.trace.back().f < 1e-7);
    CHECK(report.trace.back().grad_norm < 1e-4);
}

TEST_CASE("an exhausted line search is captured in the termination state") {
    // Same degenerate instance under the default step grid: no admissible
    // exponent exists near the flat minimum, and the solver reports it
    // rather than throwing.
    const ProblemInstance inst = validate_problem({Matrix::Ones(3, 3)}, 2);
    SolverConfig config;
    Matrix start(3, 1);
    start << 0.4, 1.1, -0.3;
    config.init_angles = AngleMatrix(start);
    const SolveReport report = solve(inst, config);
    CHECK(report.termination == Termination::line_search_failed);
    CHECK(report.trace.back().f < 1e-3); // stalls close to the minimum
    for (std::size_t i = 1; i < report.trace.size(); ++i)
        REQUIRE(report.trace[i].f <= report.trace[i - 1].f);
}

TEST_CASE("objective is monotone along every accepted trace") {
    const ProblemInstance inst = load_fixture("example31", 2);
    SolverConfig config;
    config.seed = 4;
    const SolveReport report = solve(inst, config);
    for (std::size_t i = 1; i < report.trace.size(); ++i)
        REQUIRE(report.trace[i].f <= report.trace[i - 1].f);
    CHECK_FALSE(verify_trace(inst, config, report).has_value());
}

TEST_CASE("iteration cap stops the solver") {
    const ProblemInstance inst = load_fixture("example32", 3);
    SolverConfig config;
    config.init_angles = fixture_initial_angles("example32", 3);
    config.max_iter = 3;
    const SolveReport report = solve(inst, config);
    CHECK(report.termination == Termination::max_iter);
    CHECK(report.iterations == 3);
    CHECK(report.trace.size() == 4);
}

TEST_CASE("vectorize and reshape round trip exactly") {
    std::mt19937_64 rng(3);
    const Matrix m = random_angles(5, 3, 10.0, rng);
    CHECK(reshape(vectorize(m), 5, 3) == m);
    // column-wise order
    const Vector v = vectorize(m);
    CHECK(v(0) == m(0, 0));
    CHECK(v(5) == m(0, 1));
    CHECK_THROWS_AS(reshape(v, 4, 3), DimensionMismatch);
}

TEST_CASE("rank bound one short-circuits to the all-ones matrix") {
    const ProblemInstance inst = validate_problem({Matrix::Identity(3, 3)}, 1);
    const SolveReport report = solve(inst, SolverConfig{});
    CHECK(report.termination == Termination::converged);
    CHECK(report.iterations == 0);
    CHECK(report.trace.size() == 1);
    CHECK(report.final_corr.entries() == Matrix::Ones(3, 3));
    CHECK(report.final_angles.cols() == 0);
}

TEST_CASE("solve validates explicit starting angles") {
    const ProblemInstance inst = load_fixture("example31", 3);
    SolverConfig config;
    config.init_angles = AngleMatrix::Zero(5, 3);
    CHECK_THROWS_AS(solve(inst, config), DimensionMismatch);
}

TEST_CASE("solver config ranges are enforced") {
    const ProblemInstance inst = load_fixture("example31", 2);
    SolverConfig config;
    config.rho = 1.0;
    CHECK_THROWS_AS(solve(inst, config), Error);
    config = SolverConfig{};
    config.sigma = 0.6;
    CHECK_THROWS_AS(solve(inst, config), Error);
    config = SolverConfig{};
    config.delta = 0.45;
    config.sigma = 0.4;
    CHECK_THROWS_AS(solve(inst, config), Error);
}

TEST_CASE("multistart keeps the lowest objective and is deterministic") {
    const ProblemInstance inst = load_fixture("example31", 2);
    SolverConfig config;
    config.seed = 1;
    const MultistartReport first = multistart_solve(inst, config, 4);
    REQUIRE(first.starts.size() == 4);

    double best_f = std::numeric_limits<double>::infinity();
    int best_index = 0;
    for (const StartSummary& s : first.starts) {
        if (s.f < best_f) {
            best_f = s.f;
            best_index = s.index;
        }
        REQUIRE(s.seed == config.seed + static_cast<std::uint64_t>(s.index));
    }
    CHECK(first.best_index == best_index);
    CHECK(first.best.trace.back().f == best_f);

    const MultistartReport second = multistart_solve(inst, config, 4);
    CHECK(second.best_index == first.best_index);
    CHECK(second.best.trace.back().f == first.best.trace.back().f);
}

TEST_CASE("random starts are reproducible from the recorded seed") {
    const ProblemInstance inst = load_fixture("example31", 2);
    SolverConfig config;
    config.seed = 123;
    const SolveReport a = solve(inst, config);
    REQUIRE(a.init_seed.has_value());
    REQUIRE(*a.init_seed == 123);
    const SolveReport b = solve(inst, config);
    CHECK(a.final_angles.entries() == b.final_angles.entries());
    CHECK(a.iterations == b.iterations);
}
