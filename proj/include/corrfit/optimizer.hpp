#pragma once

#include <chrono>
#include <cmath>
#include <utility>

#include "corrfit/metrics.hpp"
#include "corrfit/objective.hpp"
#include "corrfit/problem.hpp"
#include "corrfit/types.hpp"

namespace corrfit {

/// Column-wise vectorization (MATLAB's m(:)); exact round trip with reshape.
inline Vector vectorize(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Matrix reshape(const Vector& v, Index rows, Index cols) {
    if (v.size() != rows * cols)
        throw DimensionMismatch("cannot reshape vector of size " + std::to_string(v.size()) +
                                " to " + std::to_string(rows) + "x" + std::to_string(cols));
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

struct DirectionOptions {
    int restart_period = 0;        ///< 0 = never restart on schedule
    bool descent_safeguard = true; ///< fall back to -g when d'g >= 0
};

/// Fletcher-Reeves search direction:
///
///     d_0 = -g_0,    d_t = -g_t + (g_t'g_t / g_{t-1}'g_{t-1}) d_{t-1}.
///
/// Restarts to steepest descent on schedule (t a positive multiple of
/// restart_period) and, when the safeguard is on, whenever the update
/// fails to produce a descent direction.
inline Vector search_direction(const Vector& g, const Vector* g_prev, const Vector* d_prev,
                               int t, const DirectionOptions& opt = {}) {
    if (t == 0 || g_prev == nullptr || d_prev == nullptr)
        return -g;
    if (opt.restart_period > 0 && t % opt.restart_period == 0)
        return -g;
    const double gg = g.squaredNorm();
    const double gg_prev = g_prev->squaredNorm();
    if (gg_prev == 0.0) {
        if (gg == 0.0) return -g;
        throw DegenerateGradient("previous gradient is zero but current is not");
    }
    Vector d = -g + (gg / gg_prev) * (*d_prev);
    if (opt.descent_safeguard && d.dot(g) >= 0.0)
        return -g;
    return d;
}

/// Result of one backtracking line search. `accepted` implies both strong
/// Wolfe conditions hold at x + beta_t d with beta_t = rho^m_t; otherwise
/// the fields describe the last (smallest) step tried.
struct LineSearchOutcome {
    int m_t = 0;
    double beta_t = 1.0;
    double f_new = std::numeric_limits<double>::quiet_NaN();
    bool accepted = false;
    Vector x_new; ///< trial point, set on acceptance
    Vector g_new; ///< gradient there, set on acceptance
};

/// Backtracking strong Wolfe line search over step lengths rho^0, rho^1,
/// ..., rho^max_backtrack: accept the first exponent m with
///
///     f(x + rho^m d) <= f(x) + delta rho^m g'd       (sufficient decrease)
///     |grad f(x + rho^m d)' d| <= -sigma g'd          (curvature)
///
/// `value` maps a point to the objective; `gradient` maps a point to the
/// gradient vector. The gradient is only evaluated at points that pass the
/// sufficient-decrease test.
template <class ValueFn, class GradFn>
LineSearchOutcome strong_wolfe_backtrack(ValueFn&& value, GradFn&& gradient, const Vector& x,
                                         const Vector& d, const Vector& g, double f,
                                         const SolverConfig& config) {
    const double g_dot_d = g.dot(d);
    LineSearchOutcome out;
    for (int m = 0; m <= config.max_backtrack; ++m) {
        const double beta = std::pow(config.rho, m);
        Vector x_new = x + beta * d;
        const double f_new = value(x_new);
        out.m_t = m;
        out.beta_t = beta;
        out.f_new = f_new;
        if (f_new <= f + config.delta * beta * g_dot_d) {
            Vector g_new = gradient(x_new);
            if (std::abs(g_new.dot(d)) <= -config.sigma * g_dot_d) {
                out.accepted = true;
                out.x_new = std::move(x_new);
                out.g_new = std::move(g_new);
                return out;
            }
        }
    }
    out.accepted = false;
    return out;
}

/// Line search on the angle-space objective; `d` and `g` are column-wise
/// vectorizations matching `alpha`.
inline LineSearchOutcome strong_wolfe_backtrack(const ProblemInstance& instance,
                                                const AngleMatrix& alpha, const Vector& d,
                                                const Vector& g, double f,
                                                const SolverConfig& config) {
    const Index n = alpha.rows();
    const Index cols = alpha.cols();
    auto value = [&](const Vector& v) {
        return eval_objective(instance, AngleMatrix(reshape(v, n, cols)));
    };
    auto gradient = [&](const Vector& v) {
        return vectorize(eval_gradient(instance, AngleMatrix(reshape(v, n, cols))));
    };
    return strong_wolfe_backtrack(value, gradient, vectorize(alpha.entries()), d, g, f, config);
}

/// Minimize F(alpha) by Fletcher-Reeves conjugate gradient with the
/// backtracking strong Wolfe line search.
///
/// Stops when ||grad||_F < config.tol (converged), after config.max_iter
/// steps, or when no admissible step length exists (line_search_failed;
/// recorded, not thrown). For k = 1 the feasible set is the single matrix
/// ee^T and the solver returns it immediately.
inline SolveReport solve(const ProblemInstance& instance, const SolverConfig& config) {
    config.validate();
    const auto t_start = std::chrono::steady_clock::now();
    const Index n = instance.dim();
    const Index k = instance.rank_bound();

    SolveReport report;
    AngleMatrix alpha;
    if (config.init_angles) {
        alpha = *config.init_angles;
        if (alpha.rows() != n || alpha.rank() != k)
            throw DimensionMismatch("initial angles are " + std::to_string(alpha.rows()) + "x" +
                                    std::to_string(alpha.cols()) + ", expected " +
                                    std::to_string(n) + "x" + std::to_string(k - 1));
    } else {
        alpha = AngleMatrix::Random(n, k, config.seed);
        report.init_seed = config.seed;
    }

    if (k == 1) {
        // No free variables: the parametrization reaches only ee^T, so the
        // start is already the minimizer over the feasible set.
        report.final_angles = alpha;
        report.final_corr = angles_to_corr(alpha);
        const double f1 = eval_objective(instance, alpha);
        report.trace.push_back(TraceRecord{0, f1, 0.0,
                                           relative_residual_from_objective(instance, f1),
                                           std::numeric_limits<double>::quiet_NaN(), -1});
        report.termination = Termination::converged;
        report.iterations = 0;
        report.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return report;
    }

    ObjectiveEval eval = evaluate(instance, alpha);
    Vector g = vectorize(eval.gradient);
    double f = eval.value;
    double grad_norm = g.norm();

    auto push_trace = [&](int t, double step, int backtracks) {
        TraceRecord rec;
        rec.t = t;
        rec.f = f;
        rec.grad_norm = grad_norm;
        rec.rel_residual = relative_residual_from_objective(instance, f);
        rec.step = step;
        rec.backtracks = backtracks;
        report.trace.push_back(rec);
    };
    push_trace(0, std::numeric_limits<double>::quiet_NaN(), -1);

    const DirectionOptions dir_opt{config.restart_period, config.descent_safeguard};
    Vector x = vectorize(alpha.entries());
    Vector g_prev, d;
    int t = 0;
    report.termination = Termination::max_iter;
    while (true) {
        if (grad_norm < config.tol) {
            report.termination = Termination::converged;
            break;
        }
        if (t >= config.max_iter) {
            report.termination = Termination::max_iter;
            break;
        }
        d = search_direction(g, t == 0 ? nullptr : &g_prev, t == 0 ? nullptr : &d, t, dir_opt);
        const LineSearchOutcome ls = strong_wolfe_backtrack(
            instance, AngleMatrix(reshape(x, n, k - 1)), d, g, f, config);
        if (!ls.accepted) {
            report.termination = Termination::line_search_failed;
            break;
        }
        x = ls.x_new;
        f = ls.f_new;
        g_prev = std::move(g);
        g = ls.g_new;
        grad_norm = g.norm();
        ++t;
        push_trace(t, ls.beta_t, ls.m_t);
    }

    report.iterations = t;
    report.final_angles = AngleMatrix(reshape(x, n, k - 1));
    report.final_corr = angles_to_corr(report.final_angles);
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

struct StartSummary {
    int index = 0;
    std::uint64_t seed = 0;
    Termination termination = Termination::max_iter;
    int iterations = 0;
    double f = 0.0;
    double grad_norm = 0.0;
    double rel_residual = 0.0;
};

struct MultistartReport {
    SolveReport best;
    int best_index = 0;
    std::vector<StartSummary> starts;
};

/// Run `num_starts` solves from random starts seeded config.seed + s,
/// s = 0..num_starts-1, and keep the run with the lowest final objective
/// (ties broken by lowest start index). Any explicit init in the config is
/// ignored.
inline MultistartReport multistart_solve(const ProblemInstance& instance, SolverConfig config,
                                         int num_starts) {
    if (num_starts < 1)
        throw Error("multistart needs at least one start");
    config.init_angles.reset();
    const std::uint64_t base_seed = config.seed;

    MultistartReport out;
    double best_f = std::numeric_limits<double>::infinity();
    for (int s = 0; s < num_starts; ++s) {
        config.seed = base_seed + static_cast<std::uint64_t>(s);
        SolveReport rep = solve(instance, config);
        const TraceRecord& last = rep.trace.back();
        out.starts.push_back(StartSummary{s, config.seed, rep.termination, rep.iterations,
                                          last.f, last.grad_norm, last.rel_residual});
        if (last.f < best_f) {
            best_f = last.f;
            out.best_index = s;
            out.best = std::move(rep);
        }
    }
    return out;
}

} // namespace corrfit
