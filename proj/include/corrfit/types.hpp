#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace corrfit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Target matrices do not share one dimension.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A target violates the correlation-matrix structure (symmetry, unit
/// diagonal, or entry range) beyond tolerance.
class NotCorrelation : public Error {
public:
    using Error::Error;
};

/// Rank bound outside 1 <= k < n.
class RankOutOfRange : public Error {
public:
    using Error::Error;
};

/// Previous gradient is exactly zero while the current one is not; the
/// caller fed inconsistent state into the direction update.
class DegenerateGradient : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, long line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

class EmptyFile : public Error {
public:
    using Error::Error;
};

class UnknownFixture : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// The n-by-(k-1) matrix of spherical angles, the free variable of the
/// unconstrained problem. Entries are unconstrained reals (radians); for
/// k = 1 the matrix has zero columns.
class AngleMatrix {
public:
    AngleMatrix() = default;

    explicit AngleMatrix(Matrix entries) : entries_(std::move(entries)) {
        if (!entries_.allFinite())
            throw Error("angle matrix has non-finite entries");
    }

    static AngleMatrix Zero(Index n, Index k) {
        return AngleMatrix(Matrix::Zero(n, k - 1));
    }

    /// Entries i.i.d. uniform on [0,1), filled column-major from a
    /// seeded mt19937_64 stream. Deterministic across platforms.
    static AngleMatrix Random(Index n, Index k, std::uint64_t seed);

    Index rows() const { return entries_.rows(); }
    Index cols() const { return entries_.cols(); }
    /// Rank bound implied by the shape: column count + 1.
    Index rank() const { return entries_.cols() + 1; }

    const Matrix& entries() const { return entries_; }

private:
    Matrix entries_;
};

/// n-by-k factor with unit-norm rows, so that factor * factor^T is a
/// correlation matrix of rank at most k.
class FactorMatrix {
public:
    FactorMatrix() = default;
    explicit FactorMatrix(Matrix entries) : entries_(std::move(entries)) {}

    Index rows() const { return entries_.rows(); }
    Index cols() const { return entries_.cols(); }
    const Matrix& entries() const { return entries_; }

private:
    Matrix entries_;
};

/// Symmetric matrix with exact unit diagonal, PSD of rank <= k when built
/// from a k-column factor.
class CorrelationMatrix {
public:
    CorrelationMatrix() = default;
    explicit CorrelationMatrix(Matrix entries) : entries_(std::move(entries)) {}

    Index dim() const { return entries_.rows(); }
    const Matrix& entries() const { return entries_; }

private:
    Matrix entries_;
};

/// Line-search and stopping parameters. Defaults satisfy the descent
/// theory requirement 0 < delta < sigma < 0.5.
struct SolverConfig {
    double rho = 0.8;       ///< backtracking ratio, in (0,1)
    double delta = 0.1;     ///< sufficient-decrease constant, in (0,0.5)
    double sigma = 0.4;     ///< curvature constant, in (delta,0.5)
    double tol = 1e-4;      ///< stop when ||grad||_F < tol
    int max_iter = 2000;
    int max_backtrack = 60;
    int restart_period = 0;        ///< 0 = never restart on schedule
    bool descent_safeguard = true; ///< fall back to -g when d'g >= 0
    std::optional<AngleMatrix> init_angles; ///< explicit start, else random
    std::uint64_t seed = 1;                 ///< seed for the random start

    void validate() const {
        if (!(rho > 0.0 && rho < 1.0))
            throw Error("rho must lie in (0,1)");
        if (!(delta > 0.0 && delta < sigma && sigma < 0.5))
            throw Error("need 0 < delta < sigma < 0.5");
        if (!(tol >= 0.0))
            throw Error("tol must be nonnegative");
        if (max_iter < 1)
            throw Error("max_iter must be at least 1");
        if (max_backtrack < 0)
            throw Error("max_backtrack must be nonnegative");
        if (restart_period < 0)
            throw Error("restart_period must be nonnegative");
    }
};

enum class Termination { converged, max_iter, line_search_failed };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iter: return "max_iter";
        case Termination::line_search_failed: return "line_search_failed";
    }
    return "unknown";
}

/// One row of the convergence trace. `step` and `backtracks` describe the
/// line search that produced iterate t; at t = 0 they are unset (NaN / -1).
struct TraceRecord {
    int t = 0;
    double f = 0.0;
    double grad_norm = 0.0;
    double rel_residual = 0.0;
    double step = std::numeric_limits<double>::quiet_NaN();
    int backtracks = -1;
};

struct SolveReport {
    AngleMatrix final_angles;
    CorrelationMatrix final_corr;
    std::vector<TraceRecord> trace;
    Termination termination = Termination::max_iter;
    int iterations = 0;
    double wall_time = 0.0; ///< seconds
    std::optional<std::uint64_t> init_seed; ///< set when the start was random
};

inline AngleMatrix AngleMatrix::Random(Index n, Index k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Matrix a(n, k - 1);
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            a(i, j) = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return AngleMatrix(std::move(a));
}

} // namespace corrfit
