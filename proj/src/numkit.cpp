#include "dsrefine/numkit.hpp"

#include <Eigen/SVD>

#include <string>

namespace dsrefine::numkit {

double inf_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

Matrix hcat(const Matrix& left, const Matrix& right) {
    if (left.cols() == 0 && left.rows() != right.rows()) return right;
    if (right.cols() == 0 && left.rows() != right.rows()) return left;
    if (left.rows() != right.rows())
        throw DimensionMismatch("hcat: row counts differ (" + std::to_string(left.rows()) +
                                " vs " + std::to_string(right.rows()) + ")");
    Matrix out(left.rows(), left.cols() + right.cols());
    out.leftCols(left.cols()) = left;
    out.rightCols(right.cols()) = right;
    return out;
}

Matrix vcat(const Matrix& top, const Matrix& bottom) {
    if (top.rows() == 0 && top.cols() != bottom.cols()) return bottom;
    if (bottom.rows() == 0 && top.cols() != bottom.cols()) return top;
    if (top.cols() != bottom.cols())
        throw DimensionMismatch("vcat: column counts differ (" + std::to_string(top.cols()) +
                                " vs " + std::to_string(bottom.cols()) + ")");
    Matrix out(top.rows() + bottom.rows(), top.cols());
    out.topRows(top.rows()) = top;
    out.bottomRows(bottom.rows()) = bottom;
    return out;
}

int rank_of(const Matrix& m, const Tolerance& tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    const double cutoff = tol.rank_rtol * sv(0);
    if (sv(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++r;
    return r;
}

Matrix kernel_onb(const Matrix& m, const Tolerance& tol) {
    if (m.cols() == 0) return Matrix(0, 0);
    if (m.rows() == 0) return Matrix::Identity(m.cols(), m.cols());
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const int r = rank_of(m, tol);
    const Eigen::Index dim = m.cols() - r;
    Matrix basis = svd.matrixV().rightCols(dim);
    // Deterministic sign: first entry of magnitude above 1e-12 made positive.
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        for (Eigen::Index i = 0; i < basis.rows(); ++i) {
            if (std::abs(basis(i, j)) > 1e-12) {
                if (basis(i, j) < 0.0) basis.col(j) = -basis.col(j);
                break;
            }
        }
    }
    return basis;
}

Matrix right_inverse(const Matrix& m, const Tolerance& tol) {
    if (m.rows() == 0) return Matrix(m.cols(), 0);
    const int r = rank_of(m, tol);
    if (r < m.rows())
        throw RankDeficient("right_inverse: matrix has rank " + std::to_string(r) +
                            " but " + std::to_string(m.rows()) + " rows");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Vector inv_sv(sv.size());
    const double cutoff = tol.rank_rtol * sv(0);
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        inv_sv(i) = sv(i) > cutoff ? 1.0 / sv(i) : 0.0;
    return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
}

SolveResult min_norm_solve(const Matrix& a, const Matrix& b, const Tolerance& tol) {
    if (a.rows() != b.rows())
        throw DimensionMismatch("min_norm_solve: lhs has " + std::to_string(a.rows()) +
                                " rows, rhs has " + std::to_string(b.rows()));
    SolveResult out;
    if (a.cols() == 0) {
        out.solution = Matrix(0, b.cols());
        out.feasible = inf_norm(b) <= tol.residual_atol;
        return out;
    }
    if (a.rows() == 0) {
        out.solution = Matrix::Zero(a.cols(), b.cols());
        out.feasible = true;
        return out;
    }
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(tol.rank_rtol);
    out.solution = svd.solve(b);
    out.feasible = inf_norm(a * out.solution - b) <= tol.residual_atol;
    return out;
}

bool image_contained(const Matrix& inner, const Matrix& outer, const Tolerance& tol) {
    if (inner.size() == 0 || rank_of(inner, tol) == 0) return true;
    if (inner.rows() != outer.rows())
        throw DimensionMismatch("image_contained: ambient dimensions differ (" +
                                std::to_string(inner.rows()) + " vs " +
                                std::to_string(outer.rows()) + ")");
    const int r_outer = rank_of(outer, tol);
    return rank_of(hcat(outer, inner), tol) == r_outer;
}

}  // namespace dsrefine::numkit
