#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace wcf {

struct Point {
    double x;
    double p;
};

/// Finitely supported signed weight function t = sum p_i [x_i].
/// Coordinates are strictly increasing and non-negative; zero weights are never stored.
class Assignment {
public:
    Assignment() = default;
    /// Validates ordering, sign of coordinates and finiteness; drops exact zero weights.
    explicit Assignment(std::vector<Point> points);

    const std::vector<Point>& points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }
    bool empty() const { return pts_.empty(); }
    std::vector<double> coords() const;
    std::vector<double> weights() const;
    double max_abs_weight() const;

private:
    std::vector<Point> pts_;
};

/// The polynomial f of an f-assignment, f(x) = prod (a_i - x).
/// A monomial of power m is stored as m roots at zero, i.e. f(x) = (-x)^m.
struct PolySpec {
    std::vector<double> roots;
    std::optional<int> monomial_power;

    static PolySpec f0() { return {}; }
    static PolySpec from_roots(std::vector<double> r) { return {std::move(r), std::nullopt}; }
    static PolySpec monomial(int m) { return {{}, m}; }

    int degree() const;
    /// Full root list, with monomial powers expanded into zero roots.
    std::vector<double> all_roots() const;
    double eval(double x) const;
};

/// p_i = -f(x_i) / prod_{j != i} (x_j - x_i), product accumulated in log-magnitude.
Assignment lagrange_weights(std::span<const double> coords, const PolySpec& f);

/// h = positive part, g = negated negative part.
std::pair<Assignment, Assignment> split_h_g(const Assignment& t);

/// sum p_i x_i^k; negative k needs strictly positive coordinates.
double moment(const Assignment& t, int k);

/// Largest |p_i x_i^k| term, the natural scale for moment(t, k).
double moment_scale(const Assignment& t, int k);

enum class Verdict { valid, invalid, inconclusive };

struct GridConfig {
    int points = 512;
    double lambda_lo = 1e-6;
    double lambda_hi = 1e6;
    double tol = 1e-9;
};

struct ValidityReport {
    double sum_zero_residual = 0.0;  // |sum p| / sum |p|
    double min_transfer_value = 0.0; // most positive relative transfer value seen
    std::vector<double> grid;
    Verdict verdict = Verdict::invalid;
};

/// Grid test of sum t = 0 and sum t/(lambda + x) <= 0 for lambda >= 0.
/// Transfer values are measured relative to sum |p_i|/(lambda + x_i).
ValidityReport check_validity(const Assignment& t, const GridConfig& cfg = {});

/// Closed form -f(-lambda) / prod (lambda + x_i) of sum p_i/(lambda + x_i).
double transfer_oracle(std::span<const double> coords, const PolySpec& f, double lambda);

struct MochonProblem {
    std::vector<double> coords;
    PolySpec f;
};

/// Key move of the 1/10-bias game; arguments in the order x0, l1, x1, x2, x3, x4, r1, r2.
MochonProblem one_tenth_move(std::span<const double> args);

const char* to_string(Verdict v);

}  // namespace wcf
