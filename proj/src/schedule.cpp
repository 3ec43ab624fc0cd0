#include "wcf/schedule.hpp"

#include "wcf/errors.hpp"

#include <array>
#include <utility>

namespace wcf {

const char* to_string(StepTag t) {
    switch (t) {
        case StepTag::U: return "U";
        case StepTag::W: return "W";
        case StepTag::U_w: return "U_w";
        case StepTag::U_v: return "U_v";
        case StepTag::W_w: return "W_w";
        case StepTag::W_v: return "W_v";
        case StepTag::F: return "F";
        case StepTag::T: return "T";
    }
    return "?";
}

namespace {

constexpr std::array<std::pair<CaseTag, const char*>, 7> kCaseNames{{
    {CaseTag::f0_balanced, "f0-balanced"},
    {CaseTag::f0_unbalanced, "f0-unbalanced"},
    {CaseTag::monomial_aligned, "monomial-aligned"},
    {CaseTag::monomial_misaligned, "monomial-misaligned"},
    {CaseTag::monomial_unbalanced_wv, "monomial-unbalanced-wv"},
    {CaseTag::monomial_unbalanced_ww, "monomial-unbalanced-ww"},
    {CaseTag::simplest_monomial, "simplest-monomial"},
}};

// Walks the chain and keeps the power bookkeeping: kappa counts W steps taken while
// up-oriented, ell those taken while down-oriented.
class Planner {
public:
    Planner(IterationSchedule& s, int rank) : s_(s), rank_(rank) {}

    void u(StepTag tag = StepTag::U) { push(tag, true); }
    void w(StepTag tag = StepTag::W) {
        push(tag, false);
        (up_ ? kappa_ : ell_) += 1;
        --rank_;
    }
    void uw_down_to(int last_rank) {
        while (rank_ >= last_rank) {
            u();
            w();
        }
    }
    void f() {
        push(StepTag::F, true);
        up_ = !up_;
    }
    void t() { push(StepTag::T, rank_ == 1); }
    int rank() const { return rank_; }

private:
    void push(StepTag tag, bool with_powers) {
        ScheduleStep st{tag, rank_, up_, std::nullopt, std::nullopt};
        if (with_powers) {
            const int m = s_.m;
            if (up_) {
                st.contact_power = 2 * kappa_ + 1 + m;
                st.component_power = 2 * kappa_ + 2 + m;
            } else {
                st.contact_power = m - 2 * ell_ - 1;
                st.component_power = m - 2 * ell_ - 2;
            }
        }
        s_.steps.push_back(st);
    }

    IterationSchedule& s_;
    int rank_;
    bool up_ = true;
    int kappa_ = 0;
    int ell_ = 0;
};

}  // namespace

const char* to_string(CaseTag c) {
    for (const auto& [tag, name] : kCaseNames)
        if (tag == c) return name;
    return "?";
}

CaseTag case_from_string(const std::string& s) {
    for (const auto& [tag, name] : kCaseNames)
        if (s == name) return tag;
    throw InputError("unknown case: " + s);
}

CaseTag classify(int n_points, int m) {
    if (n_points < 2) throw InputError("need at least two coordinates");
    if (m < 0 || m > n_points - 2) throw InputError("monomial power out of range");
    const bool balanced = n_points % 2 == 0;
    if (m == 0) return balanced ? CaseTag::f0_balanced : CaseTag::f0_unbalanced;
    if (balanced) {
        if (m == n_points - 2) return CaseTag::simplest_monomial;
        return m % 2 == 0 ? CaseTag::monomial_aligned : CaseTag::monomial_misaligned;
    }
    if (m == n_points - 2)
        throw InputError("unbalanced m = n - 2 has no direct chain; use the transpose route");
    return m % 2 == 1 ? CaseTag::monomial_unbalanced_wv : CaseTag::monomial_unbalanced_ww;
}

IterationSchedule plan_schedule(CaseTag tag, int n_points, int m) {
    if (classify(n_points, m) != tag)
        throw InputError(std::string("(n, m) does not belong to case ") + to_string(tag));
    const int N = n_points;
    IterationSchedule s{tag, N, m, 0, {}};
    switch (tag) {
        case CaseTag::f0_balanced: {
            const int n = N / 2;
            s.dim = n;
            Planner p(s, n);
            p.uw_down_to(2);
            p.t();
            break;
        }
        case CaseTag::f0_unbalanced: {
            const int n = (N + 1) / 2;
            s.dim = n;
            Planner p(s, n);
            p.uw_down_to(3);
            p.u(StepTag::U_w);
            p.t();
            break;
        }
        case CaseTag::simplest_monomial: {
            const int n = N / 2;
            s.dim = n;
            Planner p(s, n);
            p.f();
            p.uw_down_to(2);
            p.t();
            break;
        }
        case CaseTag::monomial_aligned: {
            const int n = N / 2;
            const int k = n - 1 - m / 2;
            s.dim = n;
            Planner p(s, n);
            p.uw_down_to(n - k + 1);
            p.f();
            p.uw_down_to(2);
            p.t();
            break;
        }
        case CaseTag::monomial_misaligned: {
            const int n = N / 2;
            const int eta = n + 1;
            const int k = (2 * n - 2 - m) / 2;
            s.dim = eta;
            Planner p(s, eta);
            p.uw_down_to(eta - k + 1);
            p.f();
            p.uw_down_to(4);
            p.u(StepTag::U_v);
            p.w(StepTag::W_v);
            p.f();
            p.u(StepTag::U_w);
            p.t();
            break;
        }
        case CaseTag::monomial_unbalanced_wv: {
            const int n = (N + 1) / 2;
            const int k = (2 * n - 3 - m) / 2;
            s.dim = n;
            Planner p(s, n);
            p.uw_down_to(n - k + 1);
            p.f();
            p.uw_down_to(3);
            p.u(StepTag::U_v);
            p.t();
            break;
        }
        case CaseTag::monomial_unbalanced_ww: {
            const int n = (N + 1) / 2;
            const int k = m / 2;
            s.dim = n;
            Planner p(s, n);
            p.f();
            p.uw_down_to(n - k + 1);
            p.f();
            p.uw_down_to(3);
            p.u(StepTag::U_w);
            p.t();
            break;
        }
    }
    return s;
}

}  // namespace wcf
