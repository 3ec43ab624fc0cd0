#include "wcf/assignments.hpp"

#include "wcf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wcf {

namespace {

// Neumaier compensated sum.
struct CompensatedSum {
    long double s = 0.0L, c = 0.0L;
    void add(long double v) {
        long double t = s + v;
        if (std::fabs(s) >= std::fabs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    long double value() const { return s + c; }
};

void require_increasing(std::span<const double> xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || xs[i] < 0.0)
            throw InputError("coordinates must be finite and non-negative");
        if (i > 0 && !(xs[i] > xs[i - 1]))
            throw InputError("coordinates must be strictly increasing");
    }
}

}  // namespace

Assignment::Assignment(std::vector<Point> points) {
    std::vector<double> xs;
    xs.reserve(points.size());
    for (const auto& pt : points) {
        if (!std::isfinite(pt.p)) throw InputError("non-finite weight");
        xs.push_back(pt.x);
    }
    require_increasing(xs);
    for (const auto& pt : points)
        if (pt.p != 0.0) pts_.push_back(pt);
}

std::vector<double> Assignment::coords() const {
    std::vector<double> out;
    for (const auto& pt : pts_) out.push_back(pt.x);
    return out;
}

std::vector<double> Assignment::weights() const {
    std::vector<double> out;
    for (const auto& pt : pts_) out.push_back(pt.p);
    return out;
}

double Assignment::max_abs_weight() const {
    double m = 0.0;
    for (const auto& pt : pts_) m = std::max(m, std::fabs(pt.p));
    return m;
}

int PolySpec::degree() const {
    return static_cast<int>(roots.size()) + monomial_power.value_or(0);
}

std::vector<double> PolySpec::all_roots() const {
    std::vector<double> r = roots;
    r.insert(r.end(), static_cast<std::size_t>(monomial_power.value_or(0)), 0.0);
    return r;
}

double PolySpec::eval(double x) const {
    double v = 1.0;
    for (double a : roots) v *= (a - x);
    if (monomial_power) v *= std::pow(-x, *monomial_power);
    return v;
}

Assignment lagrange_weights(std::span<const double> coords, const PolySpec& f) {
    const std::size_t n = coords.size();
    if (n < 2) throw InputError("need at least two coordinates");
    require_increasing(coords);
    if (f.monomial_power && *f.monomial_power < 0) throw InputError("negative monomial power");
    for (double a : f.roots)
        if (!std::isfinite(a) || a < 0.0) throw InputError("roots must be finite and non-negative");
    if (f.degree() > static_cast<int>(n) - 2) throw InputError("degree of f exceeds n-2");

    const auto roots = f.all_roots();
    std::vector<Point> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = coords[i];
        long double logmag = 0.0L;
        int negatives = 1;  // leading minus sign
        bool zero = false;
        for (double a : roots) {
            const double d = a - xi;
            if (d == 0.0) { zero = true; break; }
            logmag += std::log(std::fabs(static_cast<long double>(d)));
            if (d < 0.0) ++negatives;
        }
        if (zero) {
            pts.push_back({xi, 0.0});
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = coords[j] - xi;
            logmag -= std::log(std::fabs(static_cast<long double>(d)));
            if (d < 0.0) ++negatives;
        }
        const double mag = static_cast<double>(std::exp(logmag));
        pts.push_back({xi, (negatives % 2 == 0) ? mag : -mag});
    }
    return Assignment(std::move(pts));
}

std::pair<Assignment, Assignment> split_h_g(const Assignment& t) {
    std::vector<Point> h, g;
    for (const auto& pt : t.points()) {
        if (pt.p > 0.0)
            h.push_back(pt);
        else
            g.push_back({pt.x, -pt.p});
    }
    return {Assignment(std::move(h)), Assignment(std::move(g))};
}

double moment(const Assignment& t, int k) {
    CompensatedSum acc;
    for (const auto& pt : t.points()) {
        if (k < 0 && pt.x == 0.0) throw InputError("negative moment with a zero coordinate");
        acc.add(static_cast<long double>(pt.p) * std::pow(static_cast<long double>(pt.x), k));
    }
    return static_cast<double>(acc.value());
}

double moment_scale(const Assignment& t, int k) {
    double s = 0.0;
    for (const auto& pt : t.points()) {
        if (k < 0 && pt.x == 0.0) throw InputError("negative moment with a zero coordinate");
        s = std::max(s, std::fabs(pt.p * std::pow(pt.x, k)));
    }
    return s;
}

ValidityReport check_validity(const Assignment& t, const GridConfig& cfg) {
    ValidityReport rep;
    if (cfg.points < 2 || !(cfg.lambda_lo > 0.0) || !(cfg.lambda_hi > cfg.lambda_lo) || !(cfg.tol > 0.0))
        throw InputError("bad validity grid configuration");
    rep.grid.reserve(static_cast<std::size_t>(cfg.points));
    const double step = std::log(cfg.lambda_hi / cfg.lambda_lo) / (cfg.points - 1);
    for (int i = 0; i < cfg.points; ++i) rep.grid.push_back(cfg.lambda_lo * std::exp(step * i));

    if (t.empty()) {
        rep.verdict = Verdict::valid;
        rep.min_transfer_value = -1.0;
        return rep;
    }

    CompensatedSum total;
    double abs_total = 0.0;
    for (const auto& pt : t.points()) {
        total.add(pt.p);
        abs_total += std::fabs(pt.p);
    }
    rep.sum_zero_residual = static_cast<double>(std::fabs(total.value())) / abs_total;

    auto relative_transfer = [&](double lambda) {
        CompensatedSum s;
        long double scale = 0.0L;
        for (const auto& pt : t.points()) {
            const long double den = static_cast<long double>(lambda) + pt.x;
            s.add(pt.p / den);
            scale += std::fabs(pt.p) / den;
        }
        return static_cast<double>(s.value() / scale);
    };

    double worst = -1.0;
    for (double lambda : rep.grid) worst = std::max(worst, relative_transfer(lambda));

    // lambda -> 0+: one-sided limit when a coordinate sits at the origin.
    const auto& first = t.points().front();
    if (first.x == 0.0)
        worst = std::max(worst, first.p > 0.0 ? 1.0 : -1.0);
    else
        worst = std::max(worst, relative_transfer(0.0));

    // lambda -> infinity: with sum t = 0 the leading term is -<x>/lambda^2.
    double abs_first = 0.0;
    for (const auto& pt : t.points()) abs_first += std::fabs(pt.p * pt.x);
    if (abs_first > 0.0) worst = std::max(worst, -moment(t, 1) / abs_first);

    rep.min_transfer_value = worst;
    if (rep.sum_zero_residual > cfg.tol)
        rep.verdict = Verdict::invalid;
    else if (worst <= cfg.tol)
        rep.verdict = Verdict::valid;
    else if (worst < 10.0 * cfg.tol)
        rep.verdict = Verdict::inconclusive;
    else
        rep.verdict = Verdict::invalid;
    return rep;
}

double transfer_oracle(std::span<const double> coords, const PolySpec& f, double lambda) {
    if (!(lambda >= 0.0)) throw InputError("lambda must be non-negative");
    long double den = 1.0L;
    for (double x : coords) {
        const long double d = static_cast<long double>(lambda) + x;
        if (d == 0.0L) throw InputError("pole of the transfer function");
        den *= d;
    }
    return static_cast<double>(-static_cast<long double>(f.eval(-lambda)) / den);
}

MochonProblem one_tenth_move(std::span<const double> a) {
    if (a.size() != 8) throw InputError("expected x0, l1, x1, x2, x3, x4, r1, r2");
    for (std::size_t i = 1; i < a.size(); ++i)
        if (!(a[i] > a[i - 1]))
            throw InputError("ordering x0 < l1 < x1 < x2 < x3 < x4 < r1 < r2 violated");
    if (a[0] < 0.0) throw InputError("x0 must be non-negative");
    return {{a[0], a[2], a[3], a[4], a[5]}, PolySpec::from_roots({a[1], a[6], a[7]})};
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::valid: return "valid";
        case Verdict::invalid: return "invalid";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "invalid";
}

}  // namespace wcf
