#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wcf {

enum class StepTag { U, W, U_w, U_v, W_w, W_v, F, T };

enum class CaseTag {
    f0_balanced,
    f0_unbalanced,
    monomial_aligned,
    monomial_misaligned,
    monomial_unbalanced_wv,
    monomial_unbalanced_ww,
    simplest_monomial,
};

const char* to_string(StepTag t);
const char* to_string(CaseTag c);
CaseTag case_from_string(const std::string& s);

/// One map application. `rank` is the instance rank before the step, `up` the orientation
/// (false after an odd number of flips). The powers mu in <x^mu>_f0 that the contact and
/// component gaps are proportional to are filled in for U-type, F and rank-1 T steps.
struct ScheduleStep {
    StepTag tag;
    int rank;
    bool up;
    std::optional<int> contact_power;
    std::optional<int> component_power;
};

struct IterationSchedule {
    CaseTag tag;
    int n_points;
    int m;
    int dim;
    std::vector<ScheduleStep> steps;

    /// Moments <x^mu> of an f0 assignment on n_points coordinates vanish for 0 <= mu <= n_points - 2.
    bool vanishes(int power) const { return power >= 0 && power <= n_points - 2; }
};

/// Case for a monomial of power m on n_points coordinates; m = 0 gives the f0 cases,
/// m = n_points - 2 on an even count gives the simplest monomial.
CaseTag classify(int n_points, int m);

/// Map chain for the case. Throws InputError if (n_points, m) does not belong to it.
IterationSchedule plan_schedule(CaseTag tag, int n_points, int m = 0);

}  // namespace wcf
