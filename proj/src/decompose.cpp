#include "wcf/decompose.hpp"

#include "wcf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <tuple>

namespace wcf {

const char* to_string(TermKind k) {
    switch (k) {
        case TermKind::f0: return "f0";
        case TermKind::monomial: return "monomial";
        case TermKind::effectively_monomial: return "effectively-monomial";
    }
    return "?";
}

TermKind term_kind_from_string(const std::string& s) {
    if (s == "f0") return TermKind::f0;
    if (s == "monomial") return TermKind::monomial;
    if (s == "effectively-monomial") return TermKind::effectively_monomial;
    throw InputError("unknown term kind: " + s);
}

namespace {

void check_problem(std::span<const double> coords, std::size_t degree) {
    if (coords.size() < 2) throw InputError("need at least two coordinates");
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (!std::isfinite(coords[i]) || coords[i] < 0.0)
            throw InputError("coordinates must be finite and non-negative");
        if (i > 0 && !(coords[i] > coords[i - 1]))
            throw InputError("coordinates must be strictly increasing");
    }
    if (degree + 2 > coords.size()) throw InputError("degree of f exceeds n - 2");
}

struct Leaf {
    std::vector<double> subset;
    std::vector<double> roots;  // remaining roots, all below min(subset)
    double alpha;
    std::vector<ChainOp> chain;
};

// Pairs roots with coordinates at or below them (roots ascending, each taking the smallest
// free coordinate) and peels the largest paired root. Recursion stops when no root can be
// paired, i.e. every remaining root lies below min(S).
void peel(std::vector<double> S, std::vector<double> roots, double alpha, std::vector<ChainOp> chain,
          std::vector<Leaf>& out) {
    std::sort(roots.begin(), roots.end());
    std::vector<bool> used(S.size(), false);
    std::ptrdiff_t r_idx = -1;
    std::size_t x_idx = 0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        for (std::size_t j = 0; j < S.size() && S[j] <= roots[i]; ++j) {
            if (used[j]) continue;
            used[j] = true;
            r_idx = static_cast<std::ptrdiff_t>(i);
            x_idx = j;
            break;
        }
    }
    if (r_idx < 0) {
        out.push_back({std::move(S), std::move(roots), alpha, std::move(chain)});
        return;
    }
    const double r = roots[static_cast<std::size_t>(r_idx)];
    const double xp = S[x_idx];
    std::vector<double> rest = roots;
    rest.erase(rest.begin() + r_idx);
    if (r > xp) {
        auto c = chain;
        c.push_back({ChainOp::Kind::peel, r, xp});
        peel(S, rest, alpha * (r - xp), std::move(c), out);
    }
    chain.push_back({ChainOp::Kind::drop, r, xp});
    S.erase(S.begin() + static_cast<std::ptrdiff_t>(x_idx));
    peel(std::move(S), std::move(rest), alpha, std::move(chain), out);
}

std::vector<double> reciprocal_ascending(std::span<const double> xs) {
    std::vector<double> out;
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) out.push_back(1.0 / *it);
    return out;
}

using TermKey = std::tuple<std::vector<double>, int, int, int>;

void add_term(std::vector<DecompositionTerm>& terms, std::map<TermKey, std::size_t>& index,
              DecompositionTerm term) {
    const int inverts = static_cast<int>(std::count_if(term.chain.begin(), term.chain.end(), [](const ChainOp& op) {
        return op.kind == ChainOp::Kind::invert;
    }));
    TermKey key{term.subset, static_cast<int>(term.kind), term.power, inverts};
    const auto it = index.find(key);
    if (it == index.end()) {
        index.emplace(std::move(key), terms.size());
        terms.push_back(std::move(term));
    } else {
        terms[it->second].alpha += term.alpha;
        terms[it->second].merged += term.merged;
    }
}

}  // namespace

Assignment term_base(const DecompositionTerm& term) {
    switch (term.kind) {
        case TermKind::f0: return lagrange_weights(term.subset, PolySpec::f0());
        case TermKind::monomial: return lagrange_weights(term.subset, PolySpec::monomial(term.power));
        case TermKind::effectively_monomial: return effectively_monomial_assignment(term.subset, term.power);
    }
    return {};
}

Assignment term_assignment(const DecompositionTerm& term) {
    std::vector<Point> pts = term_base(term).points();
    for (auto& pt : pts) pt.p *= term.alpha;
    return Assignment(std::move(pts));
}

Assignment recombine(const std::vector<DecompositionTerm>& terms) {
    std::map<double, double> acc;
    for (const auto& term : terms) {
        const Assignment a = term_assignment(term);
        for (const auto& pt : a.points()) acc[pt.x] += pt.p;
    }
    std::vector<Point> pts;
    for (const auto& [x, p] : acc) pts.push_back({x, p});
    return Assignment(std::move(pts));
}

std::vector<DecompositionTerm> peel_right_roots(std::span<const double> coords,
                                                std::span<const double> roots) {
    check_problem(coords, roots.size());
    std::vector<Leaf> leaves;
    peel({coords.begin(), coords.end()}, {roots.begin(), roots.end()}, 1.0, {}, leaves);
    std::vector<DecompositionTerm> terms;
    std::map<TermKey, std::size_t> index;
    for (auto& leaf : leaves) {
        if (!leaf.roots.empty())
            throw InputError("root below every remaining coordinate; invert the coordinates first");
        add_term(terms, index, {leaf.alpha, std::move(leaf.subset), TermKind::f0, 0, std::move(leaf.chain), 1});
    }
    return terms;
}

InvertedProblem invert_coordinates(std::span<const double> coords, std::span<const double> left_roots,
                                   int zero_power) {
    const auto k = static_cast<int>(left_roots.size());
    if (zero_power < 0) throw InputError("negative monomial power");
    check_problem(coords, static_cast<std::size_t>(k + zero_power));
    if (!(coords.front() > 0.0)) throw InputError("inversion needs strictly positive coordinates");
    InvertedProblem out;
    out.omega = reciprocal_ascending(coords);
    double log_kappa = 0.0;
    for (double l : left_roots) {
        if (!(l > 0.0) || !(l < coords.front()))
            throw InputError("left roots must lie in (0, x_1)");
        out.roots.push_back(1.0 / l);
        log_kappa += std::log(l);
    }
    for (double x : coords) log_kappa -= std::log(x);
    std::sort(out.roots.begin(), out.roots.end());
    out.monomial_power = static_cast<int>(coords.size()) - 2 - k - zero_power;
    out.kappa = std::exp(log_kappa);
    return out;
}

ShiftedProblem shift_origin(std::span<const double> coords, std::span<const double> roots, double c) {
    if (!std::isfinite(c) || c < 0.0) throw InputError("shift must be finite and non-negative");
    ShiftedProblem out;
    for (double x : coords) out.coords.push_back(x + c);
    for (double r : roots) out.roots.push_back(r + c);
    return out;
}

std::vector<DecompositionTerm> decompose_f_assignment(std::span<const double> coords, const PolySpec& f) {
    const std::vector<double> all = f.all_roots();
    check_problem(coords, all.size());
    for (double r : all)
        if (!std::isfinite(r) || r < 0.0) throw InputError("roots must be finite and non-negative");

    std::vector<Leaf> leaves;
    peel({coords.begin(), coords.end()}, all, 1.0, {}, leaves);

    std::vector<DecompositionTerm> terms;
    std::map<TermKey, std::size_t> index;
    for (auto& leaf : leaves) {
        if (leaf.roots.empty()) {
            add_term(terms, index, {leaf.alpha, std::move(leaf.subset), TermKind::f0, 0, std::move(leaf.chain), 1});
            continue;
        }
        std::vector<double> left;
        int zeros = 0;
        for (double r : leaf.roots) {
            if (r == 0.0)
                ++zeros;
            else
                left.push_back(r);
        }
        if (left.empty()) {
            add_term(terms, index, {leaf.alpha, std::move(leaf.subset), TermKind::monomial, zeros, std::move(leaf.chain), 1});
            continue;
        }
        // Left roots: invert, peel the now-right roots, map every omega leaf back.
        const InvertedProblem inv = invert_coordinates(leaf.subset, left, zeros);
        std::vector<double> omega_roots = inv.roots;
        omega_roots.insert(omega_roots.end(), static_cast<std::size_t>(inv.monomial_power), 0.0);
        auto chain = leaf.chain;
        chain.push_back({ChainOp::Kind::invert, 0.0, 0.0});
        std::vector<Leaf> sub;
        peel(inv.omega, omega_roots, leaf.alpha * inv.kappa, std::move(chain), sub);
        // 1/(1/x) need not round-trip, so map omega back to the original coordinates.
        std::map<double, double> back;
        for (std::size_t i = 0; i < inv.omega.size(); ++i)
            back[inv.omega[i]] = leaf.subset[leaf.subset.size() - 1 - i];
        for (auto& s : sub) {
            // roots left over on the omega side are the monomial's zeros
            if (std::any_of(s.roots.begin(), s.roots.end(), [](double r) { return r != 0.0; }))
                throw SolverError("inverted problem kept a positive left root");
            std::vector<double> xs;
            for (auto it = s.subset.rbegin(); it != s.subset.rend(); ++it) xs.push_back(back.at(*it));
            add_term(terms, index,
                     {s.alpha, std::move(xs), TermKind::effectively_monomial,
                      static_cast<int>(s.roots.size()), std::move(s.chain), 1});
        }
    }
    return terms;
}

Solution solve_term(const DecompositionTerm& term, const SolveConfig& cfg) {
    switch (term.kind) {
        case TermKind::f0: return solve_monomial(term.subset, 0, cfg);
        case TermKind::monomial: return solve_monomial(term.subset, term.power, cfg);
        case TermKind::effectively_monomial: return solve_effectively_monomial(term.subset, term.power, cfg);
    }
    throw SolverError("unknown term kind");
}

std::vector<TermSolution> solve_f_assignment(std::span<const double> coords, const PolySpec& f,
                                             const SolveConfig& cfg) {
    std::vector<TermSolution> out;
    for (auto& term : decompose_f_assignment(coords, f)) {
        Solution s = solve_term(term, cfg);
        out.push_back({std::move(term), std::move(s)});
    }
    return out;
}

}  // namespace wcf
