#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fkpp/steady.hpp"

namespace fkpp {

struct EvolutionState {
    double t = 0.0;
    Profile u;
    double dt = 0.0;
};

/// Parabolic bump alpha (1 - 4 (x - x0)^2 / w^2) supported on |x - x0| < w/2.
struct BumpIc {
    double x0 = 0.0;
    double w = 0.0;
    double amp = 0.0;
};

struct EvolveOptions {
    double change_target = 1e-4;  // target max |du| per step
    double reject_factor = 2.0;   // reject a step whose change exceeds reject_factor * target
    double steady_tol = 1e-8;     // |F|_inf threshold for steady-state detection
    int steady_span = 100;        // consecutive steps below threshold required
    double dt_init = 1e-6;
    double dt_stall = 1e-14;
    std::optional<double> fixed_dt; // disables the controller (testing hook)
};

/// Time-derivative F(u) = D u'' + u (1 - K u). Dirichlet boundary entries are
/// zero so walls stay pinned; Neumann boundary entries are (4 F_1 - F_2)/3 and
/// its mirror, which propagates the three-point zero-gradient closure in time.
std::vector<double> rhs(const SteadyProblem& p, const Profile& u);

/// One explicit midpoint step: ubar = u + (dt/2) F(u); u+ = u + dt F(ubar).
/// Throws BlowUpError if non-finite values appear.
EvolutionState step_midpoint(const EvolutionState& s, const SteadyProblem& p);

/// Generic midpoint update used by step_midpoint; exposed for direct testing.
Profile midpoint_update(const Profile& u, double dt,
                        const std::function<std::vector<double>(const Profile&)>& f);

/// Step-size controller: dt_new = min(cap, dt * clamp(0.9 * target/change, 0.5, 2)).
/// Throws StallError when dt would fall below 1e-14.
double adapt_dt(double prev_change, double dt, double cap);

/// Maximum stable time step 0.25 dx^2 / D.
double dt_cap(const SteadyProblem& p);

struct Trajectory {
    std::vector<double> snapshot_times;
    std::vector<Profile> snapshots;       // linear interpolation in t between steps
    Profile final_state;
    double t_end = 0.0;
    bool reached_steady = false;
    double terminal_residual = 0.0;       // |F|_inf at the final state
    int terminal_peaks = 0;
    long steps = 0;
};

/// Integrate until t_end or sustained steady-state detection. Neumann initial
/// data are projected onto the discrete zero-gradient closure at t = 0.
Trajectory run_ivp(const SteadyProblem& p, Profile u0, double t_end,
                   std::vector<double> snapshot_times, const EvolveOptions& opts = {});

/// Throws std::domain_error if the support extends outside [0, a].
Profile bump_profile(const Grid& g, const BumpIc& ic);

} // namespace fkpp
