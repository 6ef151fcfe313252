#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "corrfit/types.hpp"

namespace corrfit {

// Validation tolerances. Inputs are nominally exact correlation matrices
// but real data carries rounding noise.
inline constexpr double kSymTol = 1e-8;   // relative Frobenius
inline constexpr double kDiagTol = 1e-8;  // absolute
inline constexpr double kEntryTol = 1e-8; // absolute beyond [-1,1]

/// Eigenvalue threshold below which a spectrum direction does not count
/// toward the rank.
inline double rank_eig_tol(double max_eigenvalue) {
    return 1e-8 * std::max(max_eigenvalue, 1.0);
}

/// The problem data: m target correlation matrices of one dimension n and
/// the rank bound k. Immutable after construction; build via
/// validate_problem().
class ProblemInstance {
public:
    Index dim() const { return n_; }
    Index rank_bound() const { return k_; }
    Index num_targets() const { return static_cast<Index>(targets_.size()); }

    const std::vector<Matrix>& targets() const { return targets_; }

    /// sum_d A^(d), cached for residual assembly.
    const Matrix& target_sum() const { return target_sum_; }

    /// sum_d ||A^(d)||_F^2, cached for relative-residual reporting.
    double targets_sq_norm() const { return targets_sq_norm_; }

    friend ProblemInstance validate_problem(const std::vector<Matrix>&, Index);

private:
    ProblemInstance(std::vector<Matrix> targets, Index k)
        : targets_(std::move(targets)),
          n_(targets_.front().rows()),
          k_(k),
          target_sum_(Matrix::Zero(n_, n_)) {
        for (const Matrix& a : targets_) {
            target_sum_ += a;
            targets_sq_norm_ += a.squaredNorm();
        }
    }

    std::vector<Matrix> targets_;
    Index n_ = 0;
    Index k_ = 0;
    Matrix target_sum_;
    double targets_sq_norm_ = 0.0;
};

/// Check and normalize raw target matrices.
///
/// Each input must be square, share one dimension n >= 2, be symmetric
/// within kSymTol (relative Frobenius), and after symmetrization as
/// (A + A^T)/2 have unit diagonal within kDiagTol and entries within
/// kEntryTol of [-1,1]. The symmetrized copies are stored. The rank bound
/// must satisfy 1 <= k < n.
inline ProblemInstance validate_problem(const std::vector<Matrix>& raw, Index k) {
    if (raw.empty())
        throw Error("no target matrices given");

    const Index n = raw.front().rows();
    std::vector<Matrix> targets;
    targets.reserve(raw.size());
    for (std::size_t d = 0; d < raw.size(); ++d) {
        const Matrix& a = raw[d];
        if (a.rows() != a.cols())
            throw DimensionMismatch("target " + std::to_string(d + 1) + " is not square");
        if (a.rows() != n)
            throw DimensionMismatch("target " + std::to_string(d + 1) + " is " +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    ", expected " + std::to_string(n) + "x" + std::to_string(n));

        const double asym = (a - a.transpose()).norm();
        if (asym > kSymTol * std::max(a.norm(), 1.0))
            throw NotCorrelation("target " + std::to_string(d + 1) +
                                 " is not symmetric within tolerance");

        Matrix sym = 0.5 * (a + a.transpose());
        for (Index i = 0; i < n; ++i) {
            if (std::abs(sym(i, i) - 1.0) > kDiagTol)
                throw NotCorrelation("target " + std::to_string(d + 1) + " diagonal entry (" +
                                     std::to_string(i + 1) + "," + std::to_string(i + 1) +
                                     ") = " + std::to_string(sym(i, i)) + " is not 1");
            for (Index j = 0; j < n; ++j) {
                if (!std::isfinite(sym(i, j)) || std::abs(sym(i, j)) > 1.0 + kEntryTol)
                    throw NotCorrelation("target " + std::to_string(d + 1) + " entry (" +
                                         std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                         ") outside [-1,1]");
            }
        }
        targets.push_back(std::move(sym));
    }

    if (n < 2)
        throw RankOutOfRange("matrix dimension must be at least 2");
    if (k < 1 || k >= n)
        throw RankOutOfRange("rank bound " + std::to_string(k) +
                             " outside [1," + std::to_string(n - 1) + "]");

    return ProblemInstance(std::move(targets), k);
}

} // namespace corrfit
