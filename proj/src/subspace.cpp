#include "hankelid/subspace.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace hankelid {

namespace {

void check_finite(const Mat& M, const char* what) {
    if (!M.allFinite()) {
        throw InvalidInput(std::string(what) + ": non-finite entries");
    }
}

double rank_cutoff(const Mat& M, double sigma_max, const Tolerance& tol) {
    return tol.rank_rel * static_cast<double>(std::max(M.rows(), M.cols())) * sigma_max;
}

// Flip row signs so the first entry with magnitude above `scale` is positive.
void fix_signs(Mat& B, double scale) {
    for (Eigen::Index r = 0; r < B.rows(); ++r) {
        for (Eigen::Index c = 0; c < B.cols(); ++c) {
            if (std::abs(B(r, c)) > scale) {
                if (B(r, c) < 0) B.row(r) *= -1.0;
                break;
            }
        }
    }
}

}  // namespace

Eigen::Index rank(const Mat& M, const Tolerance& tol) {
    check_finite(M, "rank");
    if (M.rows() == 0 || M.cols() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cutoff = rank_cutoff(M, sv(0), tol);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++r;
    }
    return r;
}

RowSubspace left_kernel(const Mat& M, const Tolerance& tol) {
    check_finite(M, "left_kernel");
    const Eigen::Index rows = M.rows();
    if (rows == 0) return RowSubspace::zero(0);
    if (M.cols() == 0) {
        // Every row vector annihilates a matrix with no columns.
        Mat basis = Mat::Identity(rows, rows);
        return RowSubspace{rows, basis};
    }
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double cutoff = rank_cutoff(M, sv.size() > 0 ? sv(0) : 0.0, tol);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++r;
    }
    Mat basis = svd.matrixU().rightCols(rows - r).transpose();
    fix_signs(basis, tol.rank_rel);
    return RowSubspace{rows, basis};
}

Mat orthonormal_rows(const Mat& B, const Tolerance& tol) {
    check_finite(B, "orthonormal_rows");
    if (B.rows() == 0 || B.cols() == 0) return Mat(0, B.cols());
    Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = rank_cutoff(B, sv.size() > 0 ? sv(0) : 0.0, tol);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++r;
    }
    Mat basis = svd.matrixV().leftCols(r).transpose();
    fix_signs(basis, tol.rank_rel);
    return basis;
}

bool contains_rows(const RowSubspace& V, const Mat& rows, const Tolerance& tol) {
    if (rows.cols() != V.ambient_dim) return false;
    if (rows.rows() == 0) return true;
    // V.basis has orthonormal rows, so projection is basis^T basis.
    Mat residual = rows - (rows * V.basis.transpose()) * V.basis;
    return residual.cwiseAbs().maxCoeff() <= tol.residual_abs;
}

RowSubspace complement_in(const RowSubspace& inner, const RowSubspace& outer,
                          const Tolerance& tol) {
    if (inner.ambient_dim != outer.ambient_dim) {
        throw InvalidShape("complement_in: ambient dimension mismatch");
    }
    if (!contains_rows(outer, inner.basis, tol)) {
        throw NotContained("complement_in: inner subspace not contained in outer");
    }
    if (inner.dim() == 0) {
        return RowSubspace{outer.ambient_dim, orthonormal_rows(outer.basis, tol)};
    }
    // Project the outer basis onto the orthogonal complement of inner.
    Mat projected =
        outer.basis - (outer.basis * inner.basis.transpose()) * inner.basis;
    Mat basis = orthonormal_rows(projected, tol);
    return RowSubspace{outer.ambient_dim, basis};
}

RowSubspace sigma_shift(const RowSubspace& V, Eigen::Index m, Eigen::Index p) {
    if (m < 1 || p < 1) throw InvalidShape("sigma_shift: m and p must be positive");
    if (V.ambient_dim % (m + p) != 0) {
        throw InvalidShape("sigma_shift: ambient dimension not a multiple of m+p");
    }
    const Eigen::Index kappa = V.ambient_dim / (m + p);
    const Eigen::Index d = V.dim();
    Mat basis = Mat::Zero(d, (kappa + 1) * (m + p));
    if (d > 0) {
        basis.block(0, m, d, kappa * m) = V.basis.leftCols(kappa * m);
        basis.block(0, (kappa + 1) * m + p, d, kappa * p) = V.basis.rightCols(kappa * p);
    }
    return RowSubspace{(kappa + 1) * (m + p), basis};
}

RowSubspace subspace_sum(const RowSubspace& V, const RowSubspace& W,
                         const Tolerance& tol) {
    if (V.ambient_dim != W.ambient_dim) {
        throw InvalidShape("subspace_sum: ambient dimension mismatch");
    }
    Mat stacked(V.dim() + W.dim(), V.ambient_dim);
    stacked << V.basis, W.basis;
    return RowSubspace{V.ambient_dim, orthonormal_rows(stacked, tol)};
}

Mat pinv(const Mat& M, const Tolerance& tol) {
    check_finite(M, "pinv");
    if (M.rows() == 0 || M.cols() == 0) return Mat(M.cols(), M.rows());
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = rank_cutoff(M, sv.size() > 0 ? sv(0) : 0.0, tol);
    Vec inv = Vec::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

std::pair<Mat, double> lstsq_rows(const Mat& target, const Mat& regressor,
                                  const Tolerance& tol) {
    check_finite(target, "lstsq_rows");
    check_finite(regressor, "lstsq_rows");
    if (target.cols() != regressor.cols()) {
        throw InvalidShape("lstsq_rows: column count mismatch");
    }
    Mat solution = target * pinv(regressor, tol);
    double residual = 0.0;
    if (target.rows() > 0 && target.cols() > 0) {
        Mat diff = target - solution * regressor;
        residual = diff.size() > 0 ? diff.cwiseAbs().maxCoeff() : 0.0;
    }
    return {solution, residual};
}

}  // namespace hankelid
