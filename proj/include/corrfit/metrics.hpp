#pragma once

#include "corrfit/problem.hpp"
#include "corrfit/types.hpp"

namespace corrfit {

/// Relative residual: sum_d ||A^(d) - Y||_F^2 / sum_d ||A^(d)||_F^2.
/// Zero exactly when Y matches every target. The denominator is positive
/// (diagonals alone contribute n per target).
inline double relative_residual(const ProblemInstance& instance, const Matrix& y) {
    if (y.rows() != instance.dim() || y.cols() != instance.dim())
        throw DimensionMismatch("matrix dimension does not match the instance");
    double num = 0.0;
    for (const Matrix& a : instance.targets())
        num += (a - y).squaredNorm();
    return num / instance.targets_sq_norm();
}

inline double relative_residual(const ProblemInstance& instance, const CorrelationMatrix& y) {
    return relative_residual(instance, y.entries());
}

/// Relative residual recovered from an objective value, using
/// 2 F = sum_d ||A^(d) - Y||_F^2 up to the (negligible) squared diagonal
/// deviations of the targets. O(1); used for per-iteration trace rows.
inline double relative_residual_from_objective(const ProblemInstance& instance, double f) {
    return 2.0 * f / instance.targets_sq_norm();
}

/// Collapse the m targets to their arithmetic mean. The mean has unit
/// diagonal by linearity, so it validates as a correlation matrix; the
/// rank bound carries over.
inline ProblemInstance mean_target(const ProblemInstance& instance) {
    Matrix mean = instance.target_sum() / static_cast<double>(instance.num_targets());
    return validate_problem({std::move(mean)}, instance.rank_bound());
}

} // namespace corrfit
