#pragma once

#include <Eigen/Core>
#include <utility>

#include "hankelid/error.hpp"

namespace hankelid {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;

/// Tolerances shared by all rank-revealing operations. rank_rel is the
/// relative singular-value cutoff; residual_abs bounds residual entries of
/// linear solves and membership checks.
struct Tolerance {
    double rank_rel = 1e-10;
    double residual_abs = 1e-8;
};

/// A subspace of R^{1 x ambient_dim} spanned by the (orthonormal) rows of
/// `basis`. The canonical form fixes the sign of each basis row so that its
/// first entry of nontrivial magnitude is positive.
struct RowSubspace {
    Eigen::Index ambient_dim = 0;
    Mat basis;  // dim x ambient_dim, orthonormal rows

    Eigen::Index dim() const { return basis.rows(); }

    static RowSubspace zero(Eigen::Index ambient) {
        return RowSubspace{ambient, Mat(0, ambient)};
    }
};

/// Number of singular values above rank_rel * max(rows, cols) * sigma_max.
/// A void matrix has rank zero.
Eigen::Index rank(const Mat& M, const Tolerance& tol = {});

/// Orthonormal basis of { v : v M = 0 }, canonical sign convention applied.
RowSubspace left_kernel(const Mat& M, const Tolerance& tol = {});

/// Complement C of `inner` inside `outer`: outer = inner (+) C, with C
/// orthogonal to inner. Throws NotContained if inner is not a subspace of
/// outer within tolerance.
RowSubspace complement_in(const RowSubspace& inner, const RowSubspace& outer,
                          const Tolerance& tol = {});

/// Shift a subspace of R^{1 x k(m+p)} into R^{1 x (k+1)(m+p)}: every basis
/// row [v1 | v2] with v1 of width k*m becomes [0_m | v1 | 0_p | v2].
RowSubspace sigma_shift(const RowSubspace& V, Eigen::Index m, Eigen::Index p);

/// Orthonormal basis of V + W.
RowSubspace subspace_sum(const RowSubspace& V, const RowSubspace& W,
                         const Tolerance& tol = {});

/// Least-squares solve of target = solution * regressor via the
/// pseudoinverse; returns the solution and the max-abs residual entry.
std::pair<Mat, double> lstsq_rows(const Mat& target, const Mat& regressor,
                                  const Tolerance& tol = {});

/// Moore-Penrose pseudoinverse with the shared singular-value cutoff.
Mat pinv(const Mat& M, const Tolerance& tol = {});

/// Re-orthonormalize the rows of B, dropping near-dependent ones, and apply
/// the canonical sign convention.
Mat orthonormal_rows(const Mat& B, const Tolerance& tol = {});

/// True if every row of `rows` lies in V within tol.residual_abs.
bool contains_rows(const RowSubspace& V, const Mat& rows, const Tolerance& tol = {});

}  // namespace hankelid
