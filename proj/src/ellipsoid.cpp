#include "wcf/ellipsoid.hpp"

#include "wcf/errors.hpp"

#include <cmath>

namespace wcf {

Mat positive_inverse(const Mat& G, double rank_tol) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (G + G.transpose()));
    const Vec& ev = es.eigenvalues();
    const double top = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
    const double cut = rank_tol < 0.0 ? 1e-10 * top : rank_tol;
    Vec inv = Vec::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > cut) inv(i) = 1.0 / ev(i);
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Vec ellipsoid_map(const Mat& G, const Vec& v, double tol) {
    const double q = v.dot(G * v);
    if (!(q > tol * std::max(1.0, v.squaredNorm())))
        throw GeometryError("ellipsoid_map: point lies in the null cone of G");
    return v / std::sqrt(q);
}

Vec normal(const Mat& G, const Vec& v, double tol) {
    Vec gv = G * v;
    const double n = gv.norm();
    if (!(n > tol)) throw GeometryError("normal: G v vanishes");
    return gv / n;
}

Mat weingarten(const Mat& G, const Vec& v, double tol) {
    const Vec gv = G * v;
    const Vec g2v = G * gv;
    const double m1 = v.dot(gv);
    const double m2 = gv.squaredNorm();
    const double m3 = gv.dot(g2v);
    if (!(m2 > tol) || !(m1 > 0.0)) throw GeometryError("weingarten: degenerate <G> or <G^2>");
    Mat w = G + (m3 / (m2 * m2)) * gv * gv.transpose() -
            (gv * g2v.transpose() + g2v * gv.transpose()) / m2;
    return std::sqrt(m1 / m2) * 0.5 * (w + w.transpose());
}

Mat reverse_weingarten(const Mat& G, const Mat& G_pinv, const Vec& v, double tol) {
    const Vec gv = G * v;
    const double m1 = v.dot(gv);
    const double m2 = gv.squaredNorm();
    if (!(m1 > tol)) throw GeometryError("reverse_weingarten: <G> vanishes");
    Mat w = G_pinv - v * v.transpose() / m1;
    return std::sqrt(m2 / m1) * 0.5 * (w + w.transpose());
}

Vec orth_component(const Vec& ref, const Vec& target, double tol) {
    Vec r = target - ref.dot(target) * ref;
    const double n = r.norm();
    if (!(n > tol * std::max(1.0, target.norm())))
        throw GeometryError("orth_component: target parallel to reference");
    return r / n;
}

Vec orth_component(const Mat& G, const Vec& v, double tol) {
    return orth_component(normal(G, v), v, tol);
}

double support(const Mat& G_pinv, const Vec& u) {
    return std::sqrt(std::max(0.0, u.dot(G_pinv * u)));
}

Mat sherman_morrison(const Mat& A_inv, const Vec& a, const Vec& b, double tol) {
    const Vec Aa = A_inv * a;
    const Vec bA = A_inv.transpose() * b;
    const double den = 1.0 + b.dot(Aa);
    if (!(std::fabs(den) > tol)) throw GeometryError("sherman_morrison: singular update");
    return A_inv - Aa * bA.transpose() / den;
}

}  // namespace wcf
