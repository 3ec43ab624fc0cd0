#pragma once

#include "wcf/assignments.hpp"
#include "wcf/instances.hpp"
#include "wcf/schedule.hpp"

#include <array>
#include <optional>
#include <vector>

namespace wcf {

struct VerifyConfig {
    double orth_tol = 1e-10;
    double map_tol = 1e-10;
    /// Finite instances: min eig(H - O G O^T) >= -psd_tol * max(|H|, |G|).
    double psd_tol = 1e-9;
    /// Limit instances: min eig >= -C eps over the sweep with C <= c_max.
    std::vector<double> eps_sweep{1e-2, 1e-3, 1e-4};
    double c_max = 100.0;
};

/// Gaps measured before one step of a chain.
struct StepRecord {
    StepTag tag;
    int rank;
    bool up;
    double contact_gap;
    double component_gap;
    double contact_scale;
    double component_scale;
    std::optional<int> contact_power;
    std::optional<int> component_power;
};

struct EpsSample {
    double eps;
    double min_eig;
};

struct SolutionCertificate {
    Mat O;
    double orthogonality_residual = 0.0;  // max |O^T O - I|
    double mapping_residual = 0.0;        // |O v - w| / |w|
    double psd_min_eig = 0.0;             // finite: min eig; limit: min over the sweep
    bool limit = false;
    std::vector<EpsSample> eps_sweep;
    double eps_slope = 0.0;               // max over the sweep of max(0, -min_eig) / eps
    std::vector<StepRecord> step_log;
    bool pass = false;
};

/// Checks O^T O = I, O v = w and H >= O G O^T; limit instances are materialized at each eps.
/// Only the starting instance (identity frames, no normals) is meaningful here.
SolutionCertificate verify_solution(const ExtendedMatrixInstance& inst, const Mat& O,
                                    const VerifyConfig& cfg = {});

/// Prob[H, psi] - Prob[G, psi] with eigenvalues binned at 1e-9 times the spread.
Assignment ebm_reconstruct(const Mat& H, const Mat& G, const Vec& psi);

struct BruteForceHit {
    Mat O;
    double angle;
    bool reflection;
    double mapping_residual;
};

/// Scans rotations and rotation-reflections of the plane at step `step` and returns the
/// feasible matrix with the smallest mapping residual. Feasible means |O v - w| <= 1e-4 |w|
/// and min eig(H - O G O^T) >= -1e-4 |H|.
std::optional<BruteForceHit> brute_force_2x2(const Mat& H, const Mat& G, const Vec& w,
                                             const Vec& v, double step = 1e-5);
/// Best feasible hit in each class: [0] rotations, [1] rotation-reflections.
std::array<std::optional<BruteForceHit>, 2> brute_force_2x2_classes(const Mat& H, const Mat& G,
                                                                     const Vec& w, const Vec& v,
                                                                     double step = 1e-5);

/// Square finite instance of size n_h + n_g - 1: H padded with xi, G padded with chi.
ExtendedMatrixInstance pad_generic_instance(const Assignment& h, const Assignment& g, double chi,
                                            double xi);

}  // namespace wcf
