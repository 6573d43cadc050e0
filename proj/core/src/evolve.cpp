#include "fkpp/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fkpp/errors.hpp"

namespace fkpp {

namespace {

// F(u) into out, reusing the convolution result buffer.
void rhs_into(const SteadyProblem& p, const Profile& u, std::vector<double>& out) {
    const int n = p.grid.n;
    const double dx2 = p.grid.dx * p.grid.dx;
    const double D = p.params.D;
    const std::vector<double> conv = p.conv.apply(u);
    out.resize(n + 1);
    for (int i = 1; i < n; ++i)
        out[i] = D * (u[i - 1] - 2.0 * u[i] + u[i + 1]) / dx2 + u[i] * (1.0 - conv[i]);
    if (p.params.bc == Bc::dirichlet) {
        out[0] = 0.0;
        out[n] = 0.0;
    } else {
        // time derivative of the three-point zero-gradient closure
        out[0] = (4.0 * out[1] - out[2]) / 3.0;
        out[n] = (4.0 * out[n - 1] - out[n - 2]) / 3.0;
    }
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Pin Dirichlet walls / enforce the Neumann closure on initial data.
void project_boundary(const SteadyProblem& p, Profile& u) {
    const int n = p.grid.n;
    if (p.params.bc == Bc::dirichlet) {
        u[0] = 0.0;
        u[n] = 0.0;
    } else {
        u[0] = (4.0 * u[1] - u[2]) / 3.0;
        u[n] = (4.0 * u[n - 1] - u[n - 2]) / 3.0;
    }
}

} // namespace

std::vector<double> rhs(const SteadyProblem& p, const Profile& u) {
    check_profile(p.grid, u);
    std::vector<double> out;
    rhs_into(p, u, out);
    return out;
}

Profile midpoint_update(const Profile& u, double dt,
                        const std::function<std::vector<double>(const Profile&)>& f) {
    const size_t m = u.size();
    std::vector<double> k1 = f(u);
    Profile mid(m);
    for (size_t i = 0; i < m; ++i) mid[i] = u[i] + 0.5 * dt * k1[i];
    std::vector<double> k2 = f(mid);
    Profile next(m);
    for (size_t i = 0; i < m; ++i) next[i] = u[i] + dt * k2[i];
    return next;
}

EvolutionState step_midpoint(const EvolutionState& s, const SteadyProblem& p) {
    // bypass input validation inside the stages: a diverging intermediate state
    // must surface as BlowUpError, not as a profile check failure
    auto f = [&p](const Profile& v) {
        std::vector<double> out_f;
        rhs_into(p, v, out_f);
        return out_f;
    };
    EvolutionState out;
    out.u = midpoint_update(s.u, s.dt, f);
    if (!all_finite(out.u))
        throw BlowUpError("evolve: non-finite state at t = " + std::to_string(s.t), s.t, s.u);
    out.t = s.t + s.dt;
    out.dt = s.dt;
    return out;
}

double adapt_dt(double prev_change, double dt, double cap) {
    if (prev_change < 0.0) throw std::invalid_argument("adapt_dt: negative change");
    const double target = 1e-4;
    const double factor = std::clamp(0.9 * target / std::max(prev_change, 1e-16), 0.5, 2.0);
    const double dt_new = std::min(cap, dt * factor);
    if (dt_new < 1e-14) throw StallError("evolve: time step fell below 1e-14");
    return dt_new;
}

double dt_cap(const SteadyProblem& p) {
    return 0.25 * p.grid.dx * p.grid.dx / p.params.D;
}

Trajectory run_ivp(const SteadyProblem& p, Profile u0, double t_end,
                   std::vector<double> snapshot_times, const EvolveOptions& opts) {
    check_profile(p.grid, u0);
    project_boundary(p, u0);
    std::sort(snapshot_times.begin(), snapshot_times.end());

    const double cap = opts.fixed_dt ? *opts.fixed_dt : dt_cap(p);
    Trajectory traj;
    traj.snapshot_times = snapshot_times;

    Profile u = std::move(u0);
    Profile u_prev;
    double t = 0.0;
    double dt = opts.fixed_dt ? *opts.fixed_dt : std::min(opts.dt_init, cap);
    size_t next_snap = 0;
    int quiet_steps = 0;
    std::vector<double> f;

    // t = 0 snapshots
    while (next_snap < snapshot_times.size() && snapshot_times[next_snap] <= 0.0) {
        traj.snapshots.push_back(u);
        ++next_snap;
    }

    while (t < t_end) {
        dt = std::min(dt, t_end - t);
        u_prev = u;
        const double t_prev = t;

        double change = 0.0;
        auto f_raw = [&p](const Profile& v) {
            std::vector<double> out_f;
            rhs_into(p, v, out_f);
            return out_f;
        };
        while (true) {
            Profile next = midpoint_update(u_prev, dt, f_raw);
            if (!all_finite(next))
                throw BlowUpError("evolve: non-finite state at t = " + std::to_string(t_prev),
                                  t_prev, u_prev);
            change = 0.0;
            for (size_t i = 0; i < next.size(); ++i)
                change = std::max(change, std::abs(next[i] - u_prev[i]));
            if (opts.fixed_dt || change <= opts.reject_factor * opts.change_target) {
                u = std::move(next);
                break;
            }
            dt *= 0.5; // realised change too large: reject and retry
            if (dt < opts.dt_stall) throw StallError("evolve: time step fell below stall limit");
        }
        t = t_prev + dt;
        ++traj.steps;

        while (next_snap < snapshot_times.size() && snapshot_times[next_snap] <= t) {
            const double ts = snapshot_times[next_snap];
            const double theta = (ts - t_prev) / dt;
            Profile snap(u.size());
            for (size_t i = 0; i < u.size(); ++i)
                snap[i] = (1.0 - theta) * u_prev[i] + theta * u[i];
            traj.snapshots.push_back(std::move(snap));
            ++next_snap;
        }

        rhs_into(p, u, f);
        const double fn = inf_norm(f);
        quiet_steps = (fn < opts.steady_tol) ? quiet_steps + 1 : 0;
        if (quiet_steps >= opts.steady_span) {
            traj.reached_steady = true;
            break;
        }

        if (!opts.fixed_dt) {
            const double factor =
                std::clamp(0.9 * opts.change_target / std::max(change, 1e-16), 0.5, 2.0);
            dt = std::min(cap, dt * factor);
            if (dt < opts.dt_stall) throw StallError("evolve: time step fell below stall limit");
        }
    }

    // a steady-detection exit still owes the caller the remaining snapshots;
    // the state no longer changes, so they all equal the final state
    while (next_snap < snapshot_times.size()) {
        traj.snapshots.push_back(u);
        ++next_snap;
    }

    rhs_into(p, u, f);
    traj.terminal_residual = inf_norm(f);
    traj.terminal_peaks = count_peaks(u, 0.1, p.params.bc);
    traj.t_end = t;
    traj.final_state = std::move(u);
    return traj;
}

Profile bump_profile(const Grid& g, const BumpIc& ic) {
    if (!(ic.w > 0.0) || !(ic.amp > 0.0))
        throw std::domain_error("bump: width and amplitude must be positive");
    const double lo = ic.x0 - 0.5 * ic.w;
    const double hi = ic.x0 + 0.5 * ic.w;
    if (lo < 0.0 || hi > g.a)
        throw std::domain_error("bump: support [x0 - w/2, x0 + w/2] must lie inside [0, a]");
    Profile u(g.size(), 0.0);
    for (int i = 0; i <= g.n; ++i) {
        const double d = g.x[i] - ic.x0;
        if (std::abs(d) < 0.5 * ic.w) u[i] = ic.amp * (1.0 - 4.0 * d * d / (ic.w * ic.w));
    }
    return u;
}

} // namespace fkpp
