#pragma once

#include <cmath>

#include "corrfit/param.hpp"
#include "corrfit/problem.hpp"
#include "corrfit/types.hpp"

namespace corrfit {

/// Objective value and its gradient with respect to the angles.
struct ObjectiveEval {
    double value = 0.0;
    Matrix gradient; ///< same shape as the angle matrix
};

namespace detail {

inline void check_shapes(const ProblemInstance& instance, const AngleMatrix& alpha) {
    if (alpha.rows() != instance.dim() || alpha.rank() != instance.rank_bound())
        throw DimensionMismatch("angle matrix is " + std::to_string(alpha.rows()) + "x" +
                                std::to_string(alpha.cols()) + ", expected " +
                                std::to_string(instance.dim()) + "x" +
                                std::to_string(instance.rank_bound() - 1));
}

inline double objective_from_corr(const ProblemInstance& instance, const Matrix& y) {
    double f = 0.0;
    for (const Matrix& a : instance.targets())
        for (Index i = 0; i + 1 < y.rows(); ++i)
            for (Index j = i + 1; j < y.cols(); ++j) {
                const double r = y(i, j) - a(i, j);
                f += r * r;
            }
    return f;
}

/// Gradient given the factor X and the summed residual R = m*Y - sum_d A.
/// Row mu of the gradient is assembled from W_mu = sum_{i != mu} R_mu,i X_i
/// and the partial derivatives of row mu of X, which cost O(k) each via
/// running sine products (no division, so zero sines are harmless).
inline Matrix gradient_from_residual(const AngleMatrix& alpha, const Matrix& x,
                                     const Matrix& r) {
    const Matrix& a = alpha.entries();
    const Index n = a.rows();
    const Index km1 = a.cols();
    const Index k = km1 + 1;

    // W = R X with the i == mu term removed.
    Matrix w = r * x;
    for (Index mu = 0; mu < n; ++mu)
        w.row(mu) -= r(mu, mu) * x.row(mu);

    Matrix grad(n, km1);
    Vector prefix(k), t(k);
    for (Index mu = 0; mu < n; ++mu) {
        prefix(0) = 1.0;
        for (Index p = 0; p < km1; ++p)
            prefix(p + 1) = prefix(p) * std::sin(a(mu, p));
        for (Index nu = 0; nu < km1; ++nu) {
            // t = d(row mu of X)/d(a(mu,nu)); zero below index nu.
            t(nu) = -std::sin(a(mu, nu)) * prefix(nu);
            double running = std::cos(a(mu, nu)) * prefix(nu);
            for (Index p = nu + 1; p < km1; ++p) {
                t(p) = std::cos(a(mu, p)) * running;
                running *= std::sin(a(mu, p));
            }
            t(km1) = running;
            double acc = 0.0;
            for (Index p = nu; p < k; ++p)
                acc += t(p) * w(mu, p);
            grad(mu, nu) = 2.0 * acc;
        }
    }
    return grad;
}

} // namespace detail

/// F(alpha) = sum_d sum_{i<j} (y_ij(alpha) - A^(d)_ij)^2.
///
/// Equals (1/2) sum_d ||A^(d) - Y(alpha)||_F^2 when every target has exact
/// unit diagonal.
inline double eval_objective(const ProblemInstance& instance, const AngleMatrix& alpha) {
    detail::check_shapes(instance, alpha);
    const CorrelationMatrix y = angles_to_corr(alpha);
    return detail::objective_from_corr(instance, y.entries());
}

/// Analytic gradient of F. O(m n^2 + n^2 k + n k^2) per call.
inline Matrix eval_gradient(const ProblemInstance& instance, const AngleMatrix& alpha) {
    detail::check_shapes(instance, alpha);
    const Matrix x = angles_to_factor(alpha).entries();
    const Matrix y = factor_to_corr(FactorMatrix(x)).entries();
    const Matrix r = static_cast<double>(instance.num_targets()) * y - instance.target_sum();
    return detail::gradient_from_residual(alpha, x, r);
}

/// Objective and gradient in one pass over shared intermediates.
inline ObjectiveEval evaluate(const ProblemInstance& instance, const AngleMatrix& alpha) {
    detail::check_shapes(instance, alpha);
    const Matrix x = angles_to_factor(alpha).entries();
    const Matrix y = factor_to_corr(FactorMatrix(x)).entries();
    const Matrix r = static_cast<double>(instance.num_targets()) * y - instance.target_sum();
    return ObjectiveEval{detail::objective_from_corr(instance, y),
                         detail::gradient_from_residual(alpha, x, r)};
}

/// Literal entrywise form of F, one closed-form entry at a time. Reference
/// path for testing the production evaluation; O(m n^2 k) with no shared
/// intermediates.
inline double eval_objective_reference(const ProblemInstance& instance,
                                       const AngleMatrix& alpha) {
    detail::check_shapes(instance, alpha);
    double f = 0.0;
    const Index n = instance.dim();
    for (const Matrix& a : instance.targets())
        for (Index i = 0; i + 1 < n; ++i)
            for (Index j = i + 1; j < n; ++j) {
                const double r = corr_entry(alpha, i, j) - a(i, j);
                f += r * r;
            }
    return f;
}

/// Literal three-term partial-derivative form of the gradient,
///
///   dF/da_mu,nu = 2 sum_d sum_{i != mu} (y_mu,i - A^(d)_mu,i) *
///                 ( -sin a_mu,nu cos a_i,nu prod_{l<nu} sin a_mu,l sin a_i,l
///                   + cos a_mu,nu sin a_i,nu prod_{l<k-1, l!=nu} sin a_mu,l sin a_i,l
///                   + cos a_mu,nu sin a_i,nu sum_{p>nu} cos a_mu,p cos a_i,p
///                                            prod_{l<p, l!=nu} sin a_mu,l sin a_i,l ),
///
/// with empty products equal to 1 and empty sums equal to 0. Reference
/// path, O(m n^2 k^2).
inline Matrix eval_gradient_reference(const ProblemInstance& instance,
                                      const AngleMatrix& alpha) {
    detail::check_shapes(instance, alpha);
    const Matrix& a = alpha.entries();
    const Index n = a.rows();
    const Index km1 = a.cols();
    Matrix grad = Matrix::Zero(n, km1);
    for (Index mu = 0; mu < n; ++mu) {
        for (Index nu = 0; nu < km1; ++nu) {
            double acc = 0.0;
            for (const Matrix& t : instance.targets()) {
                for (Index i = 0; i < n; ++i) {
                    if (i == mu) continue;
                    const double resid = corr_entry(alpha, mu, i) - t(mu, i);

                    double term1 = -std::sin(a(mu, nu)) * std::cos(a(i, nu));
                    for (Index l = 0; l < nu; ++l)
                        term1 *= std::sin(a(mu, l)) * std::sin(a(i, l));

                    double term2 = std::cos(a(mu, nu)) * std::sin(a(i, nu));
                    for (Index l = 0; l < km1; ++l) {
                        if (l == nu) continue;
                        term2 *= std::sin(a(mu, l)) * std::sin(a(i, l));
                    }

                    double term3 = 0.0;
                    for (Index p = nu + 1; p < km1; ++p) {
                        double prod = std::cos(a(mu, p)) * std::cos(a(i, p));
                        for (Index l = 0; l < p; ++l) {
                            if (l == nu) continue;
                            prod *= std::sin(a(mu, l)) * std::sin(a(i, l));
                        }
                        term3 += prod;
                    }
                    term3 *= std::cos(a(mu, nu)) * std::sin(a(i, nu));

                    acc += resid * (term1 + term2 + term3);
                }
            }
            grad(mu, nu) = 2.0 * acc;
        }
    }
    return grad;
}

/// Central-difference approximation of the gradient, one component at a
/// time: (F(a + h E) - F(a - h E)) / (2h).
inline Matrix finite_difference_gradient(const ProblemInstance& instance,
                                         const AngleMatrix& alpha, double h) {
    detail::check_shapes(instance, alpha);
    if (!(h > 0.0))
        throw Error("finite-difference step must be positive");
    Matrix base = alpha.entries();
    Matrix grad(base.rows(), base.cols());
    for (Index j = 0; j < base.cols(); ++j) {
        for (Index i = 0; i < base.rows(); ++i) {
            Matrix pert = base;
            pert(i, j) = base(i, j) + h;
            const double fp = eval_objective(instance, AngleMatrix(pert));
            pert(i, j) = base(i, j) - h;
            const double fm = eval_objective(instance, AngleMatrix(pert));
            grad(i, j) = (fp - fm) / (2.0 * h);
        }
    }
    return grad;
}

} // namespace corrfit
