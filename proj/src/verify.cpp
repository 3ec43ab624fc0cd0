#include "wcf/verify.hpp"

#include "wcf/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace wcf {

namespace {

double min_eig(const Mat& A) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double op_norm(const Mat& A) {
    if (A.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

struct Bin {
    double x;
    double p;
};

void add_prob(const Mat& M, const Vec& psi, double sign, std::vector<Bin>& out) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.transpose()));
    const Vec c = es.eigenvectors().transpose() * psi;
    for (Eigen::Index i = 0; i < c.size(); ++i)
        out.push_back({es.eigenvalues()(i), sign * c(i) * c(i)});
}

}  // namespace

SolutionCertificate verify_solution(const ExtendedMatrixInstance& inst, const Mat& O,
                                    const VerifyConfig& cfg) {
    const Eigen::Index d = inst.H.dim();
    if (O.rows() != d || O.cols() != inst.G.dim() || inst.w.size() != d || inst.v.size() != O.cols())
        throw InputError("verify_solution: dimension mismatch");

    SolutionCertificate c;
    c.O = O;
    c.orthogonality_residual = (O.transpose() * O - Mat::Identity(O.cols(), O.cols())).cwiseAbs().maxCoeff();
    const double wn = inst.w.norm();
    c.mapping_residual = (O * inst.v - inst.w).norm() / (wn > 0.0 ? wn : 1.0);
    c.limit = inst.H.has_limits() || inst.G.has_limits();

    bool psd_ok = true;
    if (!c.limit) {
        const Mat& H = inst.H.finite;
        const Mat& G = inst.G.finite;
        c.psd_min_eig = min_eig(H - O * G * O.transpose());
        const double scale = std::max({op_norm(H), op_norm(G), 1e-300});
        psd_ok = c.psd_min_eig >= -cfg.psd_tol * scale;
    } else {
        if (cfg.eps_sweep.empty()) throw InputError("empty eps sweep");
        c.psd_min_eig = std::numeric_limits<double>::infinity();
        for (double eps : cfg.eps_sweep) {
            const Mat H = inst.H.materialize(eps);
            const Mat G = inst.G.materialize(eps);
            const double e = min_eig(H - O * G * O.transpose());
            c.eps_sweep.push_back({eps, e});
            c.psd_min_eig = std::min(c.psd_min_eig, e);
            c.eps_slope = std::max(c.eps_slope, std::max(0.0, -e) / eps);
        }
        psd_ok = c.eps_slope <= cfg.c_max;
    }
    c.pass = std::isfinite(c.orthogonality_residual) && c.orthogonality_residual <= cfg.orth_tol &&
             c.mapping_residual <= cfg.map_tol && psd_ok;
    return c;
}

Assignment ebm_reconstruct(const Mat& H, const Mat& G, const Vec& psi) {
    std::vector<Bin> bins;
    add_prob(H, psi, 1.0, bins);
    add_prob(G, psi, -1.0, bins);
    if (bins.empty()) return Assignment{};
    std::sort(bins.begin(), bins.end(), [](const Bin& a, const Bin& b) { return a.x < b.x; });
    const double spread = bins.back().x - bins.front().x;
    const double radius = 1e-9 * std::max(spread, 1e-300);

    // Clusters of nearby eigenvalues; location is the |p|-weighted mean, weight the signed sum.
    struct Cluster {
        double last, wsum, xsum, p;
    };
    std::vector<Cluster> merged;
    for (const Bin& b : bins) {
        const double a = std::fabs(b.p);
        if (!merged.empty() && b.x - merged.back().last <= radius) {
            Cluster& c = merged.back();
            c.last = b.x;
            c.wsum += a;
            c.xsum += a * b.x;
            c.p += b.p;
        } else {
            merged.push_back({b.x, a, a * b.x, b.p});
        }
    }

    const double drop = 1e-12 * std::max(psi.squaredNorm(), 1e-300);
    std::vector<Point> pts;
    for (const Cluster& c : merged) {
        if (std::fabs(c.p) <= drop) continue;
        const double x = c.wsum > 0.0 ? c.xsum / c.wsum : c.last;
        pts.push_back({std::max(0.0, x), c.p});
    }
    return Assignment(std::move(pts));
}

std::array<std::optional<BruteForceHit>, 2> brute_force_2x2_classes(const Mat& H, const Mat& G,
                                                                     const Vec& w, const Vec& v,
                                                                     double step) {
    if (H.rows() != 2 || G.rows() != 2 || w.size() != 2 || v.size() != 2)
        throw InputError("brute_force_2x2 needs a 2x2 instance");
    const double wn = std::max(w.norm(), 1e-300);
    const double hn = std::max(op_norm(H), 1e-300);
    const Eigen::Matrix2d H2 = H, G2 = G;
    const Eigen::Vector2d w2 = w, v2 = v;
    std::array<std::optional<BruteForceHit>, 2> best;
    const auto steps = static_cast<long>(std::ceil(2.0 * std::numbers::pi / step));
    for (int refl = 0; refl < 2; ++refl) {
        auto& b = best[static_cast<std::size_t>(refl)];
        for (long i = 0; i < steps; ++i) {
            const double th = static_cast<double>(i) * step;
            const double c = std::cos(th), s = std::sin(th);
            Eigen::Matrix2d O;
            if (refl == 0)
                O << c, -s, s, c;
            else
                O << c, s, s, -c;
            const double r = (O * v2 - w2).norm() / wn;
            if (r > 1e-4) continue;
            if (b && r >= b->mapping_residual) continue;
            const Eigen::Matrix2d D = H2 - O * G2 * O.transpose();
            // closed-form smallest eigenvalue of the symmetric 2x2
            const double a = D(0, 0), off = 0.5 * (D(0, 1) + D(1, 0)), dd = D(1, 1);
            const double lo = 0.5 * (a + dd) - std::sqrt(0.25 * (a - dd) * (a - dd) + off * off);
            if (lo < -1e-4 * hn) continue;
            b = BruteForceHit{Mat(O), th, refl == 1, r};
        }
    }
    return best;
}

std::optional<BruteForceHit> brute_force_2x2(const Mat& H, const Mat& G, const Vec& w,
                                             const Vec& v, double step) {
    const auto both = brute_force_2x2_classes(H, G, w, v, step);
    if (both[0] && both[1]) return both[1]->mapping_residual < both[0]->mapping_residual ? both[1] : both[0];
    return both[0] ? both[0] : both[1];
}

ExtendedMatrixInstance pad_generic_instance(const Assignment& h, const Assignment& g, double chi,
                                            double xi) {
    if (h.empty() || g.empty()) throw InputError("pad_generic_instance: empty side");
    for (const auto* a : {&h, &g})
        for (const auto& pt : a->points()) {
            if (pt.x < chi || pt.x > xi) throw InputError("coordinate outside [chi, xi]");
            if (!(pt.p > 0.0)) throw InputError("h and g must carry positive weights");
        }
    const auto nh = static_cast<Eigen::Index>(h.size());
    const auto ng = static_cast<Eigen::Index>(g.size());
    const Eigen::Index n = nh + ng - 1;
    Vec dh = Vec::Constant(n, xi), dg = Vec::Constant(n, chi);
    Vec w = Vec::Zero(n), v = Vec::Zero(n);
    for (Eigen::Index i = 0; i < nh; ++i) {
        dh(i) = h.points()[static_cast<std::size_t>(i)].x;
        w(i) = std::sqrt(h.points()[static_cast<std::size_t>(i)].p);
    }
    for (Eigen::Index i = 0; i < ng; ++i) {
        dg(i) = g.points()[static_cast<std::size_t>(i)].x;
        v(i) = std::sqrt(g.points()[static_cast<std::size_t>(i)].p);
    }
    ExtendedMatrixInstance inst;
    inst.H = LimitSymMatrix(Mat(dh.asDiagonal()));
    inst.G = LimitSymMatrix(Mat(dg.asDiagonal()));
    inst.H_pinv = LimitSymMatrix(Mat(positive_inverse(inst.H.finite)));
    inst.G_pinv = LimitSymMatrix(Mat(positive_inverse(inst.G.finite)));
    inst.w = w;
    inst.v = v;
    inst.frame_h = Mat::Identity(n, n);
    inst.frame_g = Mat::Identity(n, n);
    return inst;
}

}  // namespace wcf
