#include "wcf/instances.hpp"

#include "wcf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wcf {

const char* to_string(Shape s) {
    switch (s) {
        case Shape::balanced: return "balanced";
        case Shape::pad_h_infinite: return "pad_h_infinite";
        case Shape::pad_g_zero: return "pad_g_zero";
        case Shape::pad_both: return "pad_both";
    }
    return "balanced";
}

Shape shape_from_string(const std::string& s) {
    if (s == "balanced") return Shape::balanced;
    if (s == "pad_h_infinite") return Shape::pad_h_infinite;
    if (s == "pad_g_zero") return Shape::pad_g_zero;
    if (s == "pad_both") return Shape::pad_both;
    throw InputError("unknown shape: " + s);
}

namespace {

constexpr double kOverlapTol = 1e-9;

struct Side {
    LimitSymMatrix M, Minv;
    Vec x;
};

void side_from_assignment(const Assignment& a, bool pad, int pad_kind, double b, Side& s) {
    const Eigen::Index n = static_cast<Eigen::Index>(a.size()) + (pad ? 1 : 0);
    Vec diag = Vec::Zero(n);
    Eigen::VectorXi kind = Eigen::VectorXi::Zero(n);
    s.x = Vec::Zero(n);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& pt = a.points()[i];
        const auto k = static_cast<Eigen::Index>(i);
        diag(k) = pt.x;
        double scale = 1.0;
        if (b != 0.0) {
            if (pt.x == 0.0 && b < 0.0) throw InputError("negative vector power with a zero coordinate");
            scale = std::pow(pt.x, b);
        }
        s.x(k) = scale * std::sqrt(pt.p);
    }
    if (pad) kind(n - 1) = pad_kind;
    s.M = diagonal_limit(diag, kind);
    s.Minv = s.M.positive_inverse();
}

Vec unit(const Vec& x, const char* what) {
    const double n = x.norm();
    if (!(n > 0.0)) throw GeometryError(std::string(what) + ": zero vector");
    return x / n;
}

// Unit normal at x for the finite part; x must avoid divergent directions.
Vec side_normal(const LimitSymMatrix& M, const Vec& x) {
    const Vec mx = M.apply(x, kOverlapTol);
    const double n = mx.norm();
    if (!(n > 1e-14 * std::max(1.0, x.norm()))) throw GeometryError("normal: M x vanishes");
    return mx / n;
}

struct SideStep {
    LimitSymMatrix M, Minv;
    Vec x;
    Mat B;
};

// One rank reduction of a side at the point y_hat (unit, in the support of M) whose normal
// is u. a1 = <M>_y and a2 = <M^2>_y are passed in because the wiggle variant gets part of
// <M^2> from the divergent direction.
SideStep side_core(const LimitSymMatrix& M, const LimitSymMatrix& Minv, const Vec& y_hat,
                   const Vec& u, double a1, double a2, const Vec& x) {
    const Eigen::Index k = M.dim();
    if (!(a1 > 0.0) || !(a2 > 0.0)) throw GeometryError("degenerate <M> or <M^2>");
    if (M.zero_dirs.cols() && (M.zero_dirs.transpose() * u).norm() > kOverlapTol)
        throw SolverError("normal overlaps a vanishing direction");
    if (M.null_dirs.cols() && (M.null_dirs.transpose() * u).norm() > kOverlapTol)
        throw SolverError("normal overlaps the kernel");

    const Mat Pu = Mat::Identity(k, k) - u * u.transpose();
    Mat Dp = M.inf_dirs;
    if (Dp.cols()) {
        Dp = orthonormalize(Pu * M.inf_dirs);
        if (Dp.cols() != M.inf_dirs.cols())
            throw GeometryError("normal lies inside the divergent subspace");
    }
    const Mat PW = Pu - Dp * Dp.transpose();
    const Mat PS = PW - M.zero_dirs * M.zero_dirs.transpose() - M.null_dirs * M.null_dirs.transpose();

    SideStep out;
    out.B = complement_basis(u, k);
    const Mat& B = out.B;

    Mat fwd = std::sqrt(a1 / a2) * (PW * M.finite * PW);
    out.M.finite = B.transpose() * fwd * B;
    out.M.finite = 0.5 * (out.M.finite + out.M.finite.transpose());
    out.M.inf_dirs = orthonormalize(B.transpose() * Dp);
    out.M.zero_dirs = orthonormalize(B.transpose() * M.zero_dirs);
    out.M.null_dirs = orthonormalize(B.transpose() * M.null_dirs);
    if (out.M.inf_dirs.cols() != Dp.cols() || out.M.zero_dirs.cols() != M.zero_dirs.cols() ||
        out.M.null_dirs.cols() != M.null_dirs.cols())
        throw SolverError("rank reduction dropped a tracked direction");

    Mat rev = std::sqrt(a2 / a1) * (Minv.finite - y_hat * y_hat.transpose() / a1);
    rev = PS * rev * PS;
    out.Minv.finite = B.transpose() * rev * B;
    out.Minv.finite = 0.5 * (out.Minv.finite + out.Minv.finite.transpose());
    out.Minv.inf_dirs = out.M.zero_dirs;
    out.Minv.zero_dirs = out.M.inf_dirs;
    out.Minv.null_dirs = out.M.null_dirs;

    out.x = B.transpose() * orth_component(u, x);
    return out;
}

// Plain step at the probability vector x.
SideStep side_plain(const LimitSymMatrix& M, const LimitSymMatrix& Minv, const Vec& x) {
    const Vec u = side_normal(M, x);
    const Vec y_hat = unit(M.support_projector() * x, "side_plain");
    const Vec my = M.finite * y_hat;
    return side_core(M, Minv, y_hat, u, y_hat.dot(my), my.squaredNorm(), x);
}

// Wiggle step: the contact point is recovered from the normal through the positive inverse.
SideStep side_wiggle(const LimitSymMatrix& M, const LimitSymMatrix& Minv, const Vec& x,
                     const Vec& u) {
    const Vec mu = Minv.finite * u;
    const double n = mu.norm();
    if (!(n > 1e-14)) throw GeometryError("wiggle iteration: M_pinv u vanishes");
    const Vec y_hat = mu / n;
    const double a1 = y_hat.dot(M.finite * y_hat);
    const double a2 = 1.0 / (n * n);
    return side_core(M, Minv, y_hat, u, a1, a2, x);
}

void apply_h(ExtendedMatrixInstance& out, SideStep&& s) {
    out.H = std::move(s.M);
    out.H_pinv = std::move(s.Minv);
    out.w = std::move(s.x);
    out.frame_h = out.frame_h * s.B;
}

void apply_g(ExtendedMatrixInstance& out, SideStep&& s) {
    out.G = std::move(s.M);
    out.G_pinv = std::move(s.Minv);
    out.v = std::move(s.x);
    out.frame_g = out.frame_g * s.B;
}

double clamp_cos(double c) {
    if (!std::isfinite(c) || std::fabs(c) > 1.0 + 1e-10)
        throw GeometryError("wiggle initialisation: |cos theta| exceeds 1");
    return std::clamp(c, -1.0, 1.0);
}

double side_quad(const LimitSymMatrix& M, const Vec& x, int power) {
    if (M.inf_overlap(x) > kOverlapTol * std::max(1.0, x.norm()))
        return std::numeric_limits<double>::infinity();
    const Vec mx = M.finite * x;
    return power == 1 ? x.dot(mx) : mx.squaredNorm();
}

double gap(const ExtendedMatrixInstance& inst, int power) {
    const double a = side_quad(inst.H, inst.w, power);
    const double b = side_quad(inst.G, inst.v, power);
    if (std::isinf(a) && std::isinf(b)) return std::numeric_limits<double>::quiet_NaN();
    return a - b;
}

double scale(const ExtendedMatrixInstance& inst, int power) {
    const double a = side_quad(inst.H, inst.w, power);
    const double b = side_quad(inst.G, inst.v, power);
    return std::max(std::fabs(a), std::fabs(b));
}

}  // namespace

ExtendedMatrixInstance build_instance(const Assignment& h, const Assignment& g, Shape shape,
                                      double b) {
    const bool pad_h = shape == Shape::pad_h_infinite || shape == Shape::pad_both;
    const bool pad_g = shape == Shape::pad_g_zero || shape == Shape::pad_both;
    const std::size_t dh = h.size() + (pad_h ? 1 : 0);
    const std::size_t dg = g.size() + (pad_g ? 1 : 0);
    if (dh != dg || dh == 0) throw InputError("shape does not match the sizes of h and g");
    for (const auto& a : {&h, &g})
        for (const auto& pt : a->points())
            if (!(pt.p > 0.0)) throw InputError("h and g must carry positive weights");

    Side sh, sg;
    side_from_assignment(h, pad_h, +1, b, sh);
    side_from_assignment(g, pad_g, -1, b, sg);
    const double nw = sh.x.squaredNorm(), nv = sg.x.squaredNorm();
    if (std::fabs(nw - nv) > 1e-9 * std::max(nw, nv))
        throw InputError("probability vectors have unequal norms (sum t != 0)");

    ExtendedMatrixInstance inst;
    inst.H = std::move(sh.M);
    inst.H_pinv = std::move(sh.Minv);
    inst.w = std::move(sh.x);
    inst.G = std::move(sg.M);
    inst.G_pinv = std::move(sg.Minv);
    inst.v = std::move(sg.x);
    const auto d = static_cast<Eigen::Index>(dh);
    inst.frame_h = Mat::Identity(d, d);
    inst.frame_g = Mat::Identity(d, d);
    inst.vector_power = b;
    inst.shape = shape;
    return inst;
}

ExtendedMatrixInstance normal_init(const ExtendedMatrixInstance& inst) {
    ExtendedMatrixInstance out = inst;
    out.u_h = side_normal(inst.H, inst.w);
    out.u_g = side_normal(inst.G, inst.v);
    return out;
}

ExtendedMatrixInstance weingarten_iterate(const ExtendedMatrixInstance& inst) {
    if (inst.rank() < 1) throw SolverError("weingarten_iterate on an empty instance");
    ExtendedMatrixInstance out = inst;
    out.u_h.reset();
    out.u_g.reset();
    if (inst.rank() == 1) {
        out.H = LimitSymMatrix(Mat(0, 0));
        out.G = LimitSymMatrix(Mat(0, 0));
        out.H_pinv = out.H;
        out.G_pinv = out.G;
        out.w = Vec(0);
        out.v = Vec(0);
        out.frame_h = Mat(inst.frame_h.rows(), 0);
        out.frame_g = Mat(inst.frame_g.rows(), 0);
        return out;
    }
    apply_h(out, side_plain(inst.H, inst.H_pinv, inst.w));
    apply_g(out, side_plain(inst.G, inst.G_pinv, inst.v));
    return out;
}

std::optional<Vec> wiggle_room(const LimitSymMatrix& M, const Vec& x, double tol) {
    for (Eigen::Index j = 0; j < M.inf_dirs.cols(); ++j)
        if (std::fabs(M.inf_dirs.col(j).dot(x)) <= tol * std::max(1.0, x.norm()))
            return Vec(M.inf_dirs.col(j));
    return std::nullopt;
}

ExtendedMatrixInstance wiggle_normal_init_w(const ExtendedMatrixInstance& inst) {
    if (inst.H.inf_dirs.cols() == 0) throw GeometryError("no wiggle-w room");
    const auto t = wiggle_room(inst.H, inst.w);
    if (!t) throw GeometryError("w overlaps every divergent direction of H");
    const Vec uh = side_normal(inst.H, inst.w);
    const Vec ug = side_normal(inst.G, inst.v);
    const double c = clamp_cos(inst.v.dot(ug) / inst.w.dot(uh));
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    ExtendedMatrixInstance out = inst;
    out.u_h = c * uh + s * *t;
    out.u_g = ug;
    return out;
}

ExtendedMatrixInstance wiggle_normal_init_v(const ExtendedMatrixInstance& inst) {
    if (inst.G.inf_dirs.cols() == 0) throw GeometryError("no wiggle-v room");
    const auto t = wiggle_room(inst.G, inst.v);
    if (!t) throw GeometryError("v overlaps every divergent direction of G");
    const Vec uh = side_normal(inst.H, inst.w);
    const Vec ug = side_normal(inst.G, inst.v);
    const double c = clamp_cos(inst.w.dot(uh) / inst.v.dot(ug));
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    ExtendedMatrixInstance out = inst;
    out.u_h = uh;
    out.u_g = c * ug + s * *t;
    return out;
}

ExtendedMatrixInstance wiggle_iterate_w(const ExtendedMatrixInstance& inst) {
    if (!inst.u_h) throw SolverError("wiggle_iterate_w needs u_h from the wiggle initialisation");
    if (inst.rank() < 2) throw SolverError("wiggle_iterate_w needs rank >= 2");
    ExtendedMatrixInstance out = inst;
    out.u_h.reset();
    out.u_g.reset();
    apply_h(out, side_wiggle(inst.H, inst.H_pinv, inst.w, *inst.u_h));
    apply_g(out, side_plain(inst.G, inst.G_pinv, inst.v));
    return out;
}

ExtendedMatrixInstance wiggle_iterate_v(const ExtendedMatrixInstance& inst) {
    if (!inst.u_g) throw SolverError("wiggle_iterate_v needs u_g from the wiggle initialisation");
    if (inst.rank() < 2) throw SolverError("wiggle_iterate_v needs rank >= 2");
    ExtendedMatrixInstance out = inst;
    out.u_h.reset();
    out.u_g.reset();
    apply_h(out, side_plain(inst.H, inst.H_pinv, inst.w));
    apply_g(out, side_wiggle(inst.G, inst.G_pinv, inst.v, *inst.u_g));
    return out;
}

ExtendedMatrixInstance flip(const ExtendedMatrixInstance& inst) {
    ExtendedMatrixInstance out = inst;
    std::swap(out.H, out.H_pinv);
    std::swap(out.G, out.G_pinv);
    out.flipped = !inst.flipped;
    return out;
}

double contact_gap(const ExtendedMatrixInstance& inst) { return gap(inst, 1); }
double component_gap(const ExtendedMatrixInstance& inst) { return gap(inst, 2); }
double contact_scale(const ExtendedMatrixInstance& inst) { return scale(inst, 1); }
double component_scale(const ExtendedMatrixInstance& inst) { return scale(inst, 2); }

}  // namespace wcf
