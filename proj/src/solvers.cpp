#include "wcf/solvers.hpp"

#include "wcf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wcf {

namespace {

void check_coords(std::span<const double> xs, bool positive, const SolveConfig& cfg) {
    if (xs.size() < 2) throw InputError("need at least two coordinates");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || xs[i] < 0.0)
            throw InputError("coordinates must be finite and non-negative");
        if (i > 0 && !(xs[i] > xs[i - 1])) throw InputError("coordinates must be strictly increasing");
    }
    if (positive && xs.front() == 0.0)
        throw InputError("a zero coordinate carries no weight here; shift the origin first");
    const double span = xs.back() - xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] - xs[i - 1] < cfg.min_separation * span)
            throw InputError("coordinates closer than the separation threshold");
}

void push_term(Mat& O, const ExtendedMatrixInstance& inst, const Vec& uh, const Vec& ug) {
    O += inst.global_h(uh) * inst.global_g(ug).transpose();
}

void record(const ExtendedMatrixInstance& inst, const ScheduleStep& st, std::vector<StepRecord>& log) {
    if (!st.contact_power && !st.component_power) return;
    log.push_back({st.tag, st.rank, st.up, contact_gap(inst), component_gap(inst),
                   contact_scale(inst), component_scale(inst), st.contact_power,
                   st.component_power});
}

Solution finish(Assignment t, ExtendedMatrixInstance inst, IterationSchedule sched, const Mat& O,
                std::vector<StepRecord> log, std::string route, bool transposed,
                const SolveConfig& cfg) {
    Solution s;
    s.certificate = verify_solution(inst, O, cfg.verify);
    s.certificate.step_log = std::move(log);
    s.t = std::move(t);
    s.instance = std::move(inst);
    s.schedule = std::move(sched);
    s.route = std::move(route);
    s.transposed = transposed;
    return s;
}

Solution solve_direct(std::span<const double> coords, int m, CaseTag tag, const SolveConfig& cfg) {
    check_coords(coords, m > 0, cfg);
    const int N = static_cast<int>(coords.size());
    IterationSchedule sched = plan_schedule(tag, N, m);
    Assignment t = monomial_assignment(coords, m);
    const auto [h, g] = split_h_g(t);
    ExtendedMatrixInstance inst = build_instance(h, g, monomial_shape(N, m));
    std::vector<StepRecord> log;
    const Mat O = run_schedule(inst, sched, log);
    return finish(std::move(t), std::move(inst), std::move(sched), O, std::move(log), "direct",
                  false, cfg);
}

// Permutation reversing the first `finite` coordinates and fixing the padded slot.
Mat reversal(Eigen::Index dim, Eigen::Index finite) {
    Mat P = Mat::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) P(i < finite ? finite - 1 - i : i, i) = 1.0;
    return P;
}

// t is a positive multiple of the monomial of power N - 2 - k on x; the chain runs on the
// monomial of power k on omega = 1/x, whose weights are a negative multiple of t, and the
// transposed result is mapped back.
Solution transpose_route(std::span<const double> coords, Assignment t, int k, const SolveConfig& cfg) {
    check_coords(coords, true, cfg);
    const int N = static_cast<int>(coords.size());
    std::vector<double> omega(coords.rbegin(), coords.rend());
    for (double& w : omega) w = 1.0 / w;
    check_coords(omega, true, cfg);
    Solution inner = solve_monomial(omega, k, cfg);

    const auto [h, g] = split_h_g(t);
    Shape shape = monomial_shape(N, N - 2 - k);
    ExtendedMatrixInstance inst = build_instance(h, g, shape);
    const Eigen::Index d = inst.H.dim();
    if (inner.O().rows() != d) throw SolverError("transpose route: dimension mismatch");
    const Mat Ph = reversal(d, static_cast<Eigen::Index>(h.size()));
    const Mat Pg = reversal(d, static_cast<Eigen::Index>(g.size()));
    const Mat O = Ph * inner.O().transpose() * Pg;
    return finish(std::move(t), std::move(inst), std::move(inner.schedule), O,
                  std::move(inner.certificate.step_log), "transpose", true, cfg);
}

}  // namespace

Assignment monomial_assignment(std::span<const double> coords, int m) {
    return lagrange_weights(coords, PolySpec::monomial(m));
}

Assignment effectively_monomial_assignment(std::span<const double> coords, int k) {
    if (coords.size() < 2) throw InputError("need at least two coordinates");
    if (k < 0 || k > static_cast<int>(coords.size()) - 2) throw InputError("power out of range");
    std::vector<double> omega;
    for (auto it = coords.rbegin(); it != coords.rend(); ++it) {
        if (!(*it > 0.0)) throw InputError("effectively monomial assignment needs x > 0");
        omega.push_back(1.0 / *it);
    }
    const std::vector<double> q = lagrange_weights(omega, PolySpec::monomial(k)).weights();
    const std::size_t n = coords.size();
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({coords[i], -q[n - 1 - i]});
    return Assignment(std::move(pts));
}

Shape monomial_shape(int n_points, int m) {
    const bool balanced = n_points % 2 == 0;
    const bool odd = m % 2 != 0;
    if (balanced) return odd ? Shape::pad_both : Shape::balanced;
    return odd ? Shape::pad_g_zero : Shape::pad_h_infinite;
}

Mat run_schedule(const ExtendedMatrixInstance& start, const IterationSchedule& schedule,
                 std::vector<StepRecord>& log) {
    ExtendedMatrixInstance inst = start;
    const Eigen::Index dh = start.frame_h.rows(), dg = start.frame_g.rows();
    Mat O = Mat::Zero(dh, dg);
    int pushed = 0;
    for (const ScheduleStep& st : schedule.steps) {
        if (inst.rank() != st.rank)
            throw SolverError(std::string("schedule rank mismatch at ") + to_string(st.tag));
        record(inst, st, log);
        switch (st.tag) {
            case StepTag::U:
            case StepTag::U_w:
            case StepTag::U_v:
                inst = st.tag == StepTag::U     ? normal_init(inst)
                       : st.tag == StepTag::U_w ? wiggle_normal_init_w(inst)
                                                : wiggle_normal_init_v(inst);
                push_term(O, inst, *inst.u_h, *inst.u_g);
                ++pushed;
                break;
            case StepTag::W: inst = weingarten_iterate(inst); break;
            case StepTag::W_w: inst = wiggle_iterate_w(inst); break;
            case StepTag::W_v: inst = wiggle_iterate_v(inst); break;
            case StepTag::F: inst = flip(inst); break;
            case StepTag::T:
                if (inst.rank() == 2 && inst.completely_specified()) {
                    push_term(O, inst, orth_component(*inst.u_h, inst.w),
                              orth_component(*inst.u_g, inst.v));
                } else if (inst.rank() == 1) {
                    push_term(O, inst, inst.w.normalized(), inst.v.normalized());
                } else {
                    throw SolverError("terminal step needs rank 1 or a specified rank-2 instance");
                }
                ++pushed;
                break;
        }
    }
    if (pushed != schedule.dim) throw SolverError("schedule did not exhaust the instance");
    return O;
}

Solution solve_f0_balanced(std::span<const double> coords, const SolveConfig& cfg) {
    if (coords.size() % 2 != 0) throw InputError("balanced f0 needs an even number of coordinates");
    return solve_direct(coords, 0, CaseTag::f0_balanced, cfg);
}

Solution solve_f0_unbalanced(std::span<const double> coords, const SolveConfig& cfg) {
    if (coords.size() % 2 == 0) throw InputError("unbalanced f0 needs an odd number of coordinates");
    return solve_direct(coords, 0, CaseTag::f0_unbalanced, cfg);
}

Solution solve_monomial_balanced(std::span<const double> coords, int m, const SolveConfig& cfg) {
    const int N = static_cast<int>(coords.size());
    if (N % 2 != 0) throw InputError("balanced monomial needs an even number of coordinates");
    if (m < 0 || m > N - 2) throw InputError("monomial power out of range");
    if (m == 0) return solve_f0_balanced(coords, cfg);
    if (m == N - 2) return transpose_route(coords, monomial_assignment(coords, m), 0, cfg);
    return solve_direct(coords, m, classify(N, m), cfg);
}

Solution solve_simplest_monomial(std::span<const double> coords, const SolveConfig& cfg) {
    const int N = static_cast<int>(coords.size());
    if (N % 2 != 0) throw InputError("simplest monomial needs an even number of coordinates");
    if (N == 2) return solve_f0_balanced(coords, cfg);
    return solve_direct(coords, N - 2, CaseTag::simplest_monomial, cfg);
}

Solution solve_monomial_unbalanced(std::span<const double> coords, int m, const SolveConfig& cfg) {
    const int N = static_cast<int>(coords.size());
    if (N % 2 == 0) throw InputError("unbalanced monomial needs an odd number of coordinates");
    if (m < 0 || m > N - 2) throw InputError("monomial power out of range");
    if (m == 0) return solve_f0_unbalanced(coords, cfg);
    if (m == N - 2) return transpose_route(coords, monomial_assignment(coords, m), 0, cfg);
    return solve_direct(coords, m, classify(N, m), cfg);
}

Solution solve_effectively_monomial(std::span<const double> coords, int k, const SolveConfig& cfg) {
    return transpose_route(coords, effectively_monomial_assignment(coords, k), k, cfg);
}

Solution solve_monomial(std::span<const double> coords, int m, const SolveConfig& cfg) {
    return coords.size() % 2 == 0 ? solve_monomial_balanced(coords, m, cfg)
                                  : solve_monomial_unbalanced(coords, m, cfg);
}

}  // namespace wcf
