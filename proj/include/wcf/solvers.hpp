#pragma once

#include "wcf/instances.hpp"
#include "wcf/schedule.hpp"
#include "wcf/verify.hpp"

#include <span>
#include <string>

namespace wcf {

struct SolveConfig {
    VerifyConfig verify;
    /// Coordinates closer than this times the span are rejected.
    double min_separation = 1e-8;
};

/// Result of one analytic construction. `instance` is the starting instance of t in the
/// original x orientation; `schedule` and the step log refer to the instance the chain
/// actually ran on (the 1/x instance when `transposed`).
struct Solution {
    Assignment t;
    ExtendedMatrixInstance instance;
    IterationSchedule schedule;
    std::string route;
    bool transposed = false;
    SolutionCertificate certificate;

    const Mat& O() const { return certificate.O; }
};

/// Weights -(-x)^m / prod (x_j - x_i) and the shape of the matrix instance used for them.
Assignment monomial_assignment(std::span<const double> coords, int m);
Shape monomial_shape(int n_points, int m);

/// Runs the chain on the instance, accumulating O = sum |u_h><u_g| in global coordinates.
/// Gaps are measured before every U-type, F and rank-1 T step.
Mat run_schedule(const ExtendedMatrixInstance& start, const IterationSchedule& schedule,
                 std::vector<StepRecord>& log);

Solution solve_f0_balanced(std::span<const double> coords, const SolveConfig& cfg = {});
Solution solve_f0_unbalanced(std::span<const double> coords, const SolveConfig& cfg = {});
/// 0 <= m <= N - 2 on N = 2n coordinates; m = 0 and m = N - 2 use the f0 routes.
Solution solve_monomial_balanced(std::span<const double> coords, int m, const SolveConfig& cfg = {});
/// m = N - 2 on N = 2n coordinates by direct descent with the inverted matrices.
Solution solve_simplest_monomial(std::span<const double> coords, const SolveConfig& cfg = {});
/// 0 <= m <= N - 2 on N = 2n - 1 coordinates; m = 0 and m = N - 2 use the f0 routes.
Solution solve_monomial_unbalanced(std::span<const double> coords, int m, const SolveConfig& cfg = {});
/// Assignment with weights (-1/x_i)^k / prod (1/x_j - 1/x_i), solved as the monomial of power
/// k on omega = 1/x and transposed back.
Solution solve_effectively_monomial(std::span<const double> coords, int k, const SolveConfig& cfg = {});
/// Dispatch on the parity of the coordinate count.
Solution solve_monomial(std::span<const double> coords, int m, const SolveConfig& cfg = {});

/// Weights of the effectively monomial assignment of power k on coords.
Assignment effectively_monomial_assignment(std::span<const double> coords, int k);

}  // namespace wcf
