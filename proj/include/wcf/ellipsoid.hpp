#pragma once

#include <Eigen/Dense>

namespace wcf {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// <G^j> below means <v|G^j|v>. All matrices are symmetric.

/// Inverse on the span of eigenvalues above rank_tol, zero elsewhere.
/// rank_tol < 0 selects 1e-10 times the largest eigenvalue.
Mat positive_inverse(const Mat& G, double rank_tol = -1.0);

/// v / sqrt(<v|G|v>), a point on the ellipsoid <s|G|s> = 1.
Vec ellipsoid_map(const Mat& G, const Vec& v, double tol = 1e-14);

/// Unit outward normal G v / |G v|.
Vec normal(const Mat& G, const Vec& v, double tol = 1e-14);

/// Weingarten map at v:
/// sqrt(<G>/<G^2>) (G + <G^3>/<G^2>^2 G v v^T G - (G v v^T G^2 + G^2 v v^T G)/<G^2>).
Mat weingarten(const Mat& G, const Vec& v, double tol = 1e-14);

/// Reverse Weingarten map sqrt(<G^2>/<G>) (G_pinv - v v^T/<G>).
Mat reverse_weingarten(const Mat& G, const Mat& G_pinv, const Vec& v, double tol = 1e-14);

/// Unit part of target orthogonal to the unit vector ref.
Vec orth_component(const Vec& ref, const Vec& target, double tol = 1e-12);

/// Unit part of v orthogonal to normal(G, v).
Vec orth_component(const Mat& G, const Vec& v, double tol = 1e-12);

/// Support function sqrt(<u|G_pinv|u>) of the ellipsoid of G.
double support(const Mat& G_pinv, const Vec& u);

/// (A + a b^T)^{-1} from A^{-1}.
Mat sherman_morrison(const Mat& A_inv, const Vec& a, const Vec& b, double tol = 1e-14);

}  // namespace wcf
