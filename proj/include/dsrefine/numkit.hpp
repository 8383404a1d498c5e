#pragma once

#include <Eigen/Dense>

#include "dsrefine/errors.hpp"

namespace dsrefine {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Numerical tolerances shared by every rank and residual decision in the toolkit.
struct Tolerance {
    /// Relative singular-value cutoff: values above rank_rtol * sigma_max count
    /// toward the rank. Must be < 1.
    double rank_rtol = 1e-10;
    /// Absolute bound on equation residuals measured in the entrywise max norm.
    /// Must be > 0.
    double residual_atol = 1e-9;
};

namespace numkit {

/// Entrywise max-abs norm; 0 for empty matrices.
double inf_norm(const Matrix& m);

/// Stack two blocks side by side. Row counts must agree.
Matrix hcat(const Matrix& left, const Matrix& right);

/// Stack two blocks on top of each other. Column counts must agree.
Matrix vcat(const Matrix& top, const Matrix& bottom);

/// Numerical rank: the number of singular values above rank_rtol times the
/// largest one. The zero (or empty) matrix has rank 0.
int rank_of(const Matrix& m, const Tolerance& tol = {});

/**
 * Orthonormal basis of the kernel of m.
 *
 * The result N satisfies m * N ~ 0 and N^T * N = I and has
 * cols(m) - rank_of(m) columns. Columns come from the right singular vectors
 * of the small singular values, each flipped so its first nonzero entry is
 * positive; this makes the basis deterministic.
 */
Matrix kernel_onb(const Matrix& m, const Tolerance& tol = {});

/**
 * Moore-Penrose right inverse of a full-row-rank matrix, i.e. the unique
 * right inverse with rows orthogonal to ker m.
 *
 * Throws RankDeficient when rank_of(m) < rows(m).
 */
Matrix right_inverse(const Matrix& m, const Tolerance& tol = {});

/// Result of a minimum-norm least-squares solve.
struct SolveResult {
    Matrix solution;
    /// True iff the residual ||a * solution - b||_inf is within residual_atol,
    /// i.e. the system is consistent at the working tolerance.
    bool feasible = false;
};

/// Minimum-norm least-squares solution of a * x = b (b may have several
/// columns). Throws DimensionMismatch when row counts differ.
SolveResult min_norm_solve(const Matrix& a, const Matrix& b, const Tolerance& tol = {});

/// True iff the column span of `inner` is contained in the column span of
/// `outer`, decided by comparing rank_of([outer inner]) with rank_of(outer).
bool image_contained(const Matrix& inner, const Matrix& outer, const Tolerance& tol = {});

}  // namespace numkit
}  // namespace dsrefine
