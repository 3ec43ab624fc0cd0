#include "wcf/limit_matrix.hpp"

#include "wcf/errors.hpp"

#include <cmath>

namespace wcf {

LimitSymMatrix::LimitSymMatrix(Mat f)
    : finite(std::move(f)),
      inf_dirs(finite.rows(), 0),
      zero_dirs(finite.rows(), 0),
      null_dirs(finite.rows(), 0) {}

Mat hstack(std::initializer_list<const Mat*> blocks, Eigen::Index rows) {
    Eigen::Index cols = 0;
    for (const Mat* b : blocks) cols += b->cols();
    Mat out(rows, cols);
    Eigen::Index c = 0;
    for (const Mat* b : blocks) {
        if (b->cols() == 0) continue;
        out.middleCols(c, b->cols()) = *b;
        c += b->cols();
    }
    return out;
}

Mat orthonormalize(const Mat& A, double tol) {
    Mat Q(A.rows(), 0);
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        Vec c = A.col(j);
        const double scale = c.norm();
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index i = 0; i < Q.cols(); ++i) c -= Q.col(i).dot(c) * Q.col(i);
        const double r = c.norm();
        if (!(r > tol * std::max(1.0, scale))) continue;
        Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
        Q.col(Q.cols() - 1) = c / r;
    }
    return Q;
}

Mat complement_basis(const Mat& A, Eigen::Index k) {
    const Mat Q = orthonormalize(A);
    if (Q.cols() == 0) return Mat::Identity(k, k);
    Eigen::HouseholderQR<Mat> qr(Q);
    const Mat full = qr.householderQ() * Mat::Identity(k, k);
    return full.rightCols(k - Q.cols());
}

Mat LimitSymMatrix::support_projector() const {
    const Eigen::Index k = dim();
    Mat P = Mat::Identity(k, k);
    P -= inf_dirs * inf_dirs.transpose();
    P -= zero_dirs * zero_dirs.transpose();
    P -= null_dirs * null_dirs.transpose();
    return P;
}

Mat LimitSymMatrix::support_basis() const {
    return complement_basis(hstack({&inf_dirs, &zero_dirs, &null_dirs}, dim()), dim());
}

double LimitSymMatrix::inf_overlap(const Vec& x) const {
    if (inf_dirs.cols() == 0) return 0.0;
    return (inf_dirs.transpose() * x).norm();
}

double LimitSymMatrix::quad(const Vec& x, double tol) const {
    if (inf_overlap(x) > tol * std::max(1.0, x.norm()))
        throw SolverError("vector overlaps a divergent direction");
    return x.dot(finite * x);
}

Vec LimitSymMatrix::apply(const Vec& x, double tol) const {
    if (inf_overlap(x) > tol * std::max(1.0, x.norm()))
        throw SolverError("vector overlaps a divergent direction");
    return finite * x;
}

LimitSymMatrix LimitSymMatrix::positive_inverse() const {
    LimitSymMatrix out;
    const Mat S = support_basis();
    const Mat FS = S.transpose() * finite * S;
    Mat inv = Mat::Zero(dim(), dim());
    if (S.cols() > 0) {
        Eigen::LLT<Mat> llt(0.5 * (FS + FS.transpose()));
        if (llt.info() != Eigen::Success)
            throw GeometryError("positive_inverse: finite part is not definite on its support");
        inv = S * llt.solve(Mat::Identity(S.cols(), S.cols())) * S.transpose();
    }
    out.finite = 0.5 * (inv + inv.transpose());
    out.inf_dirs = zero_dirs;
    out.zero_dirs = inf_dirs;
    out.null_dirs = null_dirs;
    return out;
}

Mat LimitSymMatrix::materialize(double eps) const {
    return finite + (1.0 / eps) * inf_dirs * inf_dirs.transpose() +
           eps * zero_dirs * zero_dirs.transpose();
}

LimitSymMatrix LimitSymMatrix::compressed(const Mat& B) const {
    LimitSymMatrix out;
    out.finite = B.transpose() * finite * B;
    out.finite = 0.5 * (out.finite + out.finite.transpose());
    out.inf_dirs = orthonormalize(B.transpose() * inf_dirs);
    out.zero_dirs = orthonormalize(B.transpose() * zero_dirs);
    out.null_dirs = orthonormalize(B.transpose() * null_dirs);
    if (out.inf_dirs.cols() != inf_dirs.cols() || out.zero_dirs.cols() != zero_dirs.cols() ||
        out.null_dirs.cols() != null_dirs.cols())
        throw SolverError("compression dropped a tracked direction");
    return out;
}

LimitSymMatrix diagonal_limit(const Vec& diag, const Eigen::VectorXi& kind) {
    const Eigen::Index k = diag.size();
    LimitSymMatrix m(Mat::Zero(k, k));
    for (Eigen::Index i = 0; i < k; ++i) {
        Vec e = Vec::Unit(k, i);
        Mat* target = nullptr;
        if (kind(i) > 0)
            target = &m.inf_dirs;
        else if (kind(i) < 0)
            target = &m.zero_dirs;
        else if (diag(i) == 0.0)
            target = &m.null_dirs;
        else
            m.finite(i, i) = diag(i);
        if (target) {
            target->conservativeResize(k, target->cols() + 1);
            target->col(target->cols() - 1) = e;
        }
    }
    return m;
}

}  // namespace wcf
