#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fkpp/stability.hpp"
#include "fkpp/steady.hpp"

namespace fkpp {

struct ContinuationOptions {
    double ds_init = 1e-3;
    double ds_min = 1e-6;
    double ds_max = 5e-3;
    double grow = 1.5;   // step scale after a converged point
    double shrink = 0.5; // step scale after a Newton failure
    double a_stop = 0.0; // termination boundary in the initial direction
    int max_points = 200000;
    int direction = +1;     // sign of the first-step perturbation of a
    int newton_max_iter = 15;
    double newton_tol = 1e-10;
    int stability_stride = 0; // annotate sigma_max every k-th point (0 = off)
    int profile_stride = 50;  // retain full profiles every k-th point
    bool refine_folds = true; // re-solve at the interpolated fold arclength
    EigMode eig_mode = EigMode::dense;
};

struct BranchPoint {
    double a = 0.0;
    double A = 0.0;  // L1 norm of the profile
    Profile profile; // may be empty when not retained (see profile_stride)
    std::optional<double> sigma_max;
    std::optional<bool> stable;
    int peaks = 0;
    bool is_fold = false;
    double ds_used = 0.0;
    double s = 0.0; // accumulated arclength in the (a, A) plane
};

struct FoldInfo {
    int index = 0; // branch point at which the a-direction reversed
    double a = 0.0;
    double A = 0.0;
    double s = 0.0;
    std::optional<double> sigma_max; // from the refined fold solve
};

struct Branch {
    std::vector<BranchPoint> points;
    std::vector<FoldInfo> folds;
    Params params;
    int n = 0;
    ContinuationOptions opts;
    std::string stall_reason; // empty when tracing ended at a_stop/max_points
    int newton_failures = 0;  // rejected steps over the whole trace
};

/// Residual of the augmented system in the unknowns (u, a, A): the n+1 steady
/// rows assembled on the grid for the trial a, the area row  trapz(u) - A, and
/// the arclength row (a - a0)^2 + (A - A0)^2 - ds^2 anchored at prev.
std::vector<double> augmented_residual(const SteadyProblem& base, const Profile& u, double a,
                                       double A, const BranchPoint& prev, double ds);

struct PredictorState {
    Profile u;
    double a = 0.0;
    double A = 0.0;
};

/// Secant extrapolation through the last two points, scaled so the step in the
/// (a, A) plane has length ds.
PredictorState predict(const BranchPoint& prev2, const BranchPoint& prev, double ds);

/// Seed helpers: each returns a converged branch point.
BranchPoint seed_from_profile(const Params& p, int n, Profile guess,
                              double newton_tol = 1e-10);
BranchPoint seed_from_closed_form(const Params& p, int n);           // a < 1/2 start
BranchPoint seed_from_small_d(const Params& p, int n, int r);        // r-peak construction

/// Pseudo-arclength trace from a converged seed until a_stop, max_points, or a
/// step-size stall; points are annotated with peak counts and (at the
/// configured stride and at folds) with sigma_max.
Branch trace(const Params& params, int n, const BranchPoint& seed, const ContinuationOptions& opts);

/// Indices where the sign of da between consecutive points flips, with the fold
/// location refined by a quadratic fit of a against arclength.
std::vector<FoldInfo> detect_folds(const Branch& branch);

/// Natural-parameter continuation: fixed-a Newton solves stepping a directly
/// from the seed to target_a. Used to restart on the branch above a cusp that
/// defeated pseudo-arclength tracing. Throws StallError when the natural
/// continuation itself fails.
BranchPoint cusp_restart(const Params& params, int n, const BranchPoint& seed, double target_a,
                         const ContinuationOptions& opts);

} // namespace fkpp
