#pragma once

#include "wcf/ellipsoid.hpp"

namespace wcf {

/// Symmetric operator in the eps -> 0 limit.
/// `finite` is the limit of the bounded part. Columns of `inf_dirs` carry eigenvalue ~1/eps,
/// columns of `zero_dirs` carry eigenvalue ~eps, columns of `null_dirs` are an exact kernel.
/// The three direction sets are orthonormal, mutually orthogonal and annihilated by `finite`.
struct LimitSymMatrix {
    Mat finite;
    Mat inf_dirs;
    Mat zero_dirs;
    Mat null_dirs;

    LimitSymMatrix() = default;
    explicit LimitSymMatrix(Mat f);

    Eigen::Index dim() const { return finite.rows(); }
    bool has_limits() const { return inf_dirs.cols() > 0 || zero_dirs.cols() > 0; }

    /// Projector onto the complement of all three direction sets.
    Mat support_projector() const;
    /// Orthonormal basis of the support.
    Mat support_basis() const;

    /// |D^T x|, the overlap of x with the divergent directions.
    double inf_overlap(const Vec& x) const;
    /// <x|M|x> and M x; x must avoid the divergent directions.
    double quad(const Vec& x, double tol = 1e-9) const;
    Vec apply(const Vec& x, double tol = 1e-9) const;

    /// D <-> Z, inverse of `finite` on its support, kernel kept.
    LimitSymMatrix positive_inverse() const;

    /// finite + (1/eps) D D^T + eps Z Z^T.
    Mat materialize(double eps) const;

    /// B^T M B for B with orthonormal columns spanning a subspace that contains every
    /// direction set.
    LimitSymMatrix compressed(const Mat& B) const;
};

/// Diagonal operator; `kind[i]` is 0 for a finite entry, +1 for a divergent slot,
/// -1 for a vanishing slot. Finite zero entries become exact kernel directions.
LimitSymMatrix diagonal_limit(const Vec& diag, const Eigen::VectorXi& kind);

/// Orthonormal basis of span(A)^perp inside R^k; A may have zero columns.
Mat complement_basis(const Mat& A, Eigen::Index k);

/// Gram-Schmidt with removal of columns whose residual falls below tol.
Mat orthonormalize(const Mat& A, double tol = 1e-10);

/// Horizontal concatenation of column blocks with a common row count.
Mat hstack(std::initializer_list<const Mat*> blocks, Eigen::Index rows);

}  // namespace wcf
