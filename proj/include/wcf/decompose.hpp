#pragma once

#include "wcf/assignments.hpp"
#include "wcf/solvers.hpp"

#include <span>
#include <string>
#include <vector>

namespace wcf {

enum class TermKind { f0, monomial, effectively_monomial };

const char* to_string(TermKind k);
TermKind term_kind_from_string(const std::string& s);

struct ChainOp {
    /// peel keeps every point and scales by (root - paired), drop removes the paired point.
    enum class Kind { peel, drop, invert, shift } kind;
    double a = 0.0;  // peel/drop: root; shift: c
    double b = 0.0;  // peel/drop: paired coordinate
};

/// alpha times the canonical assignment of (kind, power) on `subset`:
///   f0                    -1 / prod (x_j - x_i)
///   monomial              -(-x_i)^k / prod (x_j - x_i)
///   effectively_monomial  (-1/x_i)^k / prod (1/x_j - 1/x_i)
struct DecompositionTerm {
    double alpha = 0.0;
    std::vector<double> subset;
    TermKind kind = TermKind::f0;
    int power = 0;
    std::vector<ChainOp> chain;
    int merged = 1;  // number of recursion leaves folded into this term
};

/// Canonical weights of a term, without alpha.
Assignment term_base(const DecompositionTerm& term);
/// alpha * term_base(term).
Assignment term_assignment(const DecompositionTerm& term);

/// Sum of alpha_i t_i over all terms, on the union of their supports.
Assignment recombine(const std::vector<DecompositionTerm>& terms);

/// Peels roots that have a coordinate below them: t_f[S] = (r - x_p) t_g[S] + t_g[S \ x_p]
/// with f = (r - x) g and x_p <= r. Roots are paired in ascending order with the smallest free
/// coordinate; the largest paired root is peeled first. Throws if a root cannot be paired.
std::vector<DecompositionTerm> peel_right_roots(std::span<const double> coords,
                                                std::span<const double> roots);

struct InvertedProblem {
    std::vector<double> omega;   // 1/x ascending
    std::vector<double> roots;   // 1/l
    int monomial_power = 0;      // power of (-omega)
    double kappa = 0.0;          // t = -kappa t'
};

/// x -> 1/x for a problem whose roots all lie below the coordinates. `zero_power` zero roots
/// ride along with the positive ones.
InvertedProblem invert_coordinates(std::span<const double> coords, std::span<const double> left_roots,
                                   int zero_power = 0);

struct ShiftedProblem {
    std::vector<double> coords;
    std::vector<double> roots;
};

/// Translates coordinates and roots by c; weights are unchanged.
ShiftedProblem shift_origin(std::span<const double> coords, std::span<const double> roots, double c);

/// Positive combination of f0, monomial and effectively monomial terms equal to the
/// f-assignment of f on coords. Identical leaves are merged.
std::vector<DecompositionTerm> decompose_f_assignment(std::span<const double> coords, const PolySpec& f);

struct TermSolution {
    DecompositionTerm term;
    Solution solution;
};

std::vector<TermSolution> solve_f_assignment(std::span<const double> coords, const PolySpec& f,
                                             const SolveConfig& cfg = {});

/// Dispatches one term to the matching solver.
Solution solve_term(const DecompositionTerm& term, const SolveConfig& cfg = {});

}  // namespace wcf
