#pragma once

#include <cmath>

#include "corrfit/types.hpp"

namespace corrfit {

/// Map spherical angles to the n-by-k factor matrix with unit-norm rows.
///
/// Row i of the result is the point on the unit (k-1)-sphere with
/// coordinates
///
///     X(i,j)   = cos(a(i,j)) * prod_{l<j} sin(a(i,l)),   j = 0..k-2
///     X(i,k-1) = prod_{l<k-1} sin(a(i,l)),
///
/// so every row has Euclidean norm 1 regardless of the angles (the
/// telescoping cos^2 + sin^2 collapse). For k = 1 the result is the
/// all-ones column: empty products are 1.
inline FactorMatrix angles_to_factor(const AngleMatrix& alpha) {
    const Matrix& a = alpha.entries();
    const Index n = a.rows();
    const Index k = a.cols() + 1;
    Matrix x(n, k);
    for (Index i = 0; i < n; ++i) {
        double sin_prod = 1.0;
        for (Index j = 0; j + 1 < k; ++j) {
            x(i, j) = std::cos(a(i, j)) * sin_prod;
            sin_prod *= std::sin(a(i, j));
        }
        x(i, k - 1) = sin_prod;
    }
    return FactorMatrix(std::move(x));
}

/// Gramian of the factor rows: Y = X X^T, computed on the upper triangle
/// and mirrored so the result is exactly symmetric. The diagonal is
/// written as literal 1.0 (the row norms guarantee it up to rounding).
inline CorrelationMatrix factor_to_corr(const FactorMatrix& factor) {
    const Matrix& x = factor.entries();
    const Index n = x.rows();
    Matrix y(n, n);
    for (Index i = 0; i < n; ++i) {
        y(i, i) = 1.0;
        for (Index j = i + 1; j < n; ++j) {
            const double v = x.row(i).dot(x.row(j));
            y(i, j) = v;
            y(j, i) = v;
        }
    }
    return CorrelationMatrix(std::move(y));
}

/// Closed-form entry of the correlation matrix, evaluated term by term:
///
///     y_ij = sum_{p<k-1} cos a_ip cos a_jp prod_{l<p} sin a_il sin a_jl
///            + prod_{l<k-1} sin a_il sin a_jl          for i != j,
///     y_ii = 1.
///
/// Agrees with the factor product entrywise to ~1e-15.
inline double corr_entry(const AngleMatrix& alpha, Index i, Index j) {
    if (i == j) return 1.0;
    const Matrix& a = alpha.entries();
    const Index km1 = a.cols();
    double sum = 0.0;
    double sin_prod = 1.0; // prod_{l<p} sin a_il sin a_jl
    for (Index p = 0; p < km1; ++p) {
        sum += std::cos(a(i, p)) * std::cos(a(j, p)) * sin_prod;
        sin_prod *= std::sin(a(i, p)) * std::sin(a(j, p));
    }
    return sum + sin_prod;
}

/// Convenience composition: angles -> factor -> correlation matrix.
inline CorrelationMatrix angles_to_corr(const AngleMatrix& alpha) {
    return factor_to_corr(angles_to_factor(alpha));
}

} // namespace corrfit
