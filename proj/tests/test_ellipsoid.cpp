#include "wcf/ellipsoid.hpp"
#include "wcf/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wcf;

namespace {

const double s2 = std::sqrt(0.5);
const double s6 = std::sqrt(1.0 / 6.0);
const double r3 = std::sqrt(3.0);

Mat diag2(double a, double b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Mat random_matrix(std::mt19937& rng, int r, int c) {
    std::normal_distribution<double> n(0.0, 1.0);
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = n(rng);
    return m;
}

Mat random_psd(std::mt19937& rng, int dim, int rank) {
    const Mat b = random_matrix(rng, dim, rank);
    return b * b.transpose();
}

Mat random_orthogonal(std::mt19937& rng, int dim) {
    Eigen::HouseholderQR<Mat> qr(random_matrix(rng, dim, dim));
    return qr.householderQ();
}

// Central-difference Hessian of u -> support(G_pinv, u), step h.
Mat support_hessian(const Mat& G_pinv, const Vec& u, double h) {
    const auto n = u.size();
    Mat H(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            Vec pp = u, pm = u, mp = u, mm = u;
            pp(i) += h;
            pp(j) += h;
            pm(i) += h;
            pm(j) -= h;
            mp(i) -= h;
            mp(j) += h;
            mm(i) -= h;
            mm(j) -= h;
            H(i, j) = (support(G_pinv, pp) - support(G_pinv, pm) - support(G_pinv, mp) + support(G_pinv, mm)) /
                      (4.0 * h * h);
        }
    return H;
}

// Random vector inside the range of G.
Vec random_in_range(std::mt19937& rng, const Mat& G) {
    return G * random_matrix(rng, static_cast<int>(G.rows()), 1).col(0);
}

}  // namespace

TEST_CASE("positive inverse") {
    const Mat p = positive_inverse(diag2(2, 0));
    CHECK(p(0, 0) == doctest::Approx(0.5));
    CHECK(p(1, 1) == 0.0);
    CHECK(std::fabs(p(0, 1)) < 1e-15);
    CHECK((positive_inverse(Mat::Identity(3, 3)) - Mat::Identity(3, 3)).norm() < 1e-14);

    std::mt19937 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 1 + trial % 6;
        const int rank = 1 + trial % dim;
        const Mat G = random_psd(rng, dim, rank);
        const Mat Gp = positive_inverse(G);
        CHECK((G * Gp * G - G).norm() <= 1e-12 * std::max(1.0, G.norm() * G.norm() * Gp.norm()));
        CHECK((Gp * G * Gp - Gp).norm() <= 1e-10 * std::max(1.0, Gp.norm() * Gp.norm() * G.norm()));
    }
}

TEST_CASE("ellipsoid map") {
    const Vec e = vec2(0.6, 0.8);
    CHECK((ellipsoid_map(Mat::Identity(2, 2), e) - e).norm() < 1e-15);
    const Vec w = vec2(s2, s6);
    CHECK((ellipsoid_map(diag2(1, 3), w) - w).norm() < 1e-15);
    CHECK((ellipsoid_map(4.0 * Mat::Identity(2, 2), e) - e / 2.0).norm() < 1e-15);
    CHECK_THROWS_AS(ellipsoid_map(diag2(1, 0), vec2(0, 1)), GeometryError);

    std::mt19937 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const Mat G = random_psd(rng, 4, 4);
        const Vec s = ellipsoid_map(G, random_matrix(rng, 4, 1).col(0));
        CHECK(s.dot(G * s) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("normals") {
    const Vec ug = normal(diag2(0, 2), vec2(s6, s2));
    CHECK(ug(0) == doctest::Approx(0.0));
    CHECK(ug(1) == doctest::Approx(1.0));
    const Vec uh = normal(diag2(1, 3), vec2(s2, s6));
    CHECK(uh(0) == doctest::Approx(0.5));
    CHECK(uh(1) == doctest::Approx(r3 / 2));
    const Vec e = vec2(0.6, -0.8);
    CHECK((normal(Mat::Identity(2, 2), e) - e).norm() < 1e-15);
    CHECK_THROWS_AS(normal(diag2(1, 0), vec2(0, 1)), GeometryError);
}

TEST_CASE("weingarten map of the worked example") {
    const Mat W = weingarten(diag2(1, 3), vec2(s2, s6));
    Mat expect(2, 2);
    expect << 9.0 / 8, -3.0 * r3 / 8, -3.0 * r3 / 8, 3.0 / 8;
    expect *= s2;
    CHECK((W - expect).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(W(0, 0) == doctest::Approx(0.7955).epsilon(1e-4));
    CHECK(W(0, 1) == doctest::Approx(-0.4593).epsilon(1e-4));
    CHECK(W(1, 1) == doctest::Approx(0.2652).epsilon(1e-3));
    CHECK((W * normal(diag2(1, 3), vec2(s2, s6))).norm() < 1e-14);

    // The oracle for the same matrix: positive inverse of the support-function Hessian.
    const Mat hess = support_hessian(positive_inverse(diag2(1, 3)), normal(diag2(1, 3), vec2(s2, s6)), 1e-5);
    CHECK((positive_inverse(hess, 1e-6) - expect).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("unit sphere maps") {
    const Vec v = vec2(0.6, 0.8);
    const Mat P = Mat::Identity(2, 2) - v * v.transpose();
    CHECK((weingarten(Mat::Identity(2, 2), v) - P).norm() < 1e-14);
    CHECK((reverse_weingarten(Mat::Identity(2, 2), Mat::Identity(2, 2), v) - P).norm() < 1e-14);
}

TEST_CASE("orthogonal components") {
    const Vec e = orth_component(diag2(1, 3), vec2(s2, s6));
    CHECK(e(0) == doctest::Approx(r3 / 2));
    CHECK(e(1) == doctest::Approx(-0.5));
    const Vec f = orth_component(diag2(0, 2), vec2(s6, s2));
    CHECK(f(0) == doctest::Approx(1.0));
    CHECK(std::fabs(f(1)) < 1e-15);
    const Vec e2 = orth_component(vec2(1, 0), vec2(0, 1));
    CHECK((e2 - vec2(0, 1)).norm() < 1e-15);
    CHECK_THROWS_AS(orth_component(vec2(1, 0), vec2(2, 0)), GeometryError);
}

TEST_CASE("support function") {
    CHECK(support(Mat::Identity(3, 3), Vec::Unit(3, 1)) == doctest::Approx(1.0));
    CHECK(support(positive_inverse(diag2(1, 3)), vec2(0.5, r3 / 2)) == doctest::Approx(s2));
    CHECK(support(positive_inverse(diag2(4, 9)), vec2(1, 0)) == doctest::Approx(0.5));
}

TEST_CASE("sherman morrison") {
    std::mt19937 rng(4);
    const Mat A = random_psd(rng, 3, 3) + Mat::Identity(3, 3);
    const Mat Ai = A.inverse();
    CHECK((sherman_morrison(Ai, Vec::Zero(3), Vec::Zero(3)) - Ai).norm() < 1e-15);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec a = random_matrix(rng, 3, 1).col(0);
        const Vec b = random_matrix(rng, 3, 1).col(0);
        const Mat direct = (A + a * b.transpose()).inverse();
        CHECK((sherman_morrison(Ai, a, b) - direct).norm() <= 1e-10 * direct.norm());
    }
    // 1 + b^T A^-1 a = 0
    const Vec a = Vec::Unit(3, 0);
    const Vec b = -Vec::Unit(3, 0) / Ai(0, 0);
    CHECK_THROWS_AS(sherman_morrison(Ai, a, b), GeometryError);
}

TEST_CASE("kernel property on random PSD matrices") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + trial % 5;
        const int rank = 1 + (trial / 5) % dim;
        const Mat G = random_psd(rng, dim, rank);
        const Vec v = random_in_range(rng, G);
        const Vec Gv = G * v;
        CHECK((weingarten(G, v) * Gv).norm() <= 1e-10 * Gv.norm() * std::max(1.0, weingarten(G, v).norm()));
        const Mat R = reverse_weingarten(G, positive_inverse(G), v);
        CHECK((R * Gv).norm() <= 1e-10 * Gv.norm() * std::max(1.0, R.norm()));
    }
}

TEST_CASE("weingarten and reverse weingarten are positive inverses") {
    std::mt19937 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + trial % 5;
        const Mat G = random_psd(rng, dim, dim) + 0.1 * Mat::Identity(dim, dim);
        const Vec v = random_matrix(rng, dim, 1).col(0);
        const Mat W = weingarten(G, v);
        const Mat R = reverse_weingarten(G, positive_inverse(G), v);
        const Mat Ri = positive_inverse(R, 1e-9 * R.norm());
        CHECK((Ri - W).norm() <= 1e-9 * W.norm());
    }
}

TEST_CASE("equivariance under isometries") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + trial % 5;
        const Mat G = random_psd(rng, dim, dim);
        const Vec v = random_matrix(rng, dim, 1).col(0);
        const Mat Q = random_orthogonal(rng, dim);
        const Mat W = weingarten(G, v);
        const Mat WQ = weingarten(Q * G * Q.transpose(), Q * v);
        CHECK((WQ - Q * W * Q.transpose()).norm() <= 1e-10 * std::max(1.0, W.norm()));
        CHECK((normal(Q * G * Q.transpose(), Q * v) - Q * normal(G, v)).norm() <= 1e-12);
    }
}

TEST_CASE("reverse weingarten is the support function hessian") {
    std::mt19937 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + trial % 5;
        const Mat G = random_psd(rng, dim, dim) + 0.5 * Mat::Identity(dim, dim);
        const Mat Gp = positive_inverse(G);
        const Vec v = random_matrix(rng, dim, 1).col(0);
        const Mat R = reverse_weingarten(G, Gp, v);
        const Mat fd = support_hessian(Gp, normal(G, v), 1e-5);
        CHECK((R - fd).cwiseAbs().maxCoeff() <= 1e-4 * std::max(1.0, R.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("reverse weingarten under scaling") {
    std::mt19937 rng(9);
    const Mat G = random_psd(rng, 3, 3) + Mat::Identity(3, 3);
    const Vec v = random_matrix(rng, 3, 1).col(0);
    const Mat R = reverse_weingarten(G, positive_inverse(G), v);
    const Mat R2 = reverse_weingarten(2.0 * G, positive_inverse(2.0 * G), v);
    // Support of 2G is 1/sqrt(2) times that of G, so is its Hessian.
    CHECK((R2 - R / std::sqrt(2.0)).norm() <= 1e-12 * R.norm());
    const Mat fd = support_hessian(positive_inverse(2.0 * G), normal(G, v), 1e-5);
    CHECK((R2 - fd).cwiseAbs().maxCoeff() <= 1e-4);
}
