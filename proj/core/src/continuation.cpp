#include "fkpp/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fkpp/errors.hpp"
#include "fkpp/oracles.hpp"

namespace fkpp {

namespace {

double hypot2(double x, double y) { return std::sqrt(x * x + y * y); }

struct AugmentedResult {
    Profile u;
    double a = 0.0;
    double A = 0.0;
    bool converged = false;
};

// Newton on the unknowns (u, a, A) with the banded core solved by LU and the
// two border columns/rows eliminated through it (bordering algorithm).
AugmentedResult solve_augmented(const Params& base, int n, PredictorState guess,
                                const BranchPoint& prev, double ds, int max_iter, double tol) {
    AugmentedResult res;
    Profile u = std::move(guess.u);
    double a = guess.a;
    double A = guess.A;

    auto make_problem = [&](double aa) {
        Params p = base;
        p.a = aa;
        return SteadyProblem::make(p, n);
    };

    auto full_norm = [&](const std::vector<double>& ru, double r_area, double r_arc) {
        return std::max({inf_norm(ru), std::abs(r_area), std::abs(r_arc)});
    };

    SteadyProblem pa = make_problem(a);
    std::vector<double> ru = residual(pa, u);
    double r_area = l1_norm(pa.grid, u) - A;
    double r_arc = (a - prev.a) * (a - prev.a) + (A - prev.A) * (A - prev.A) - ds * ds;
    double norm = full_norm(ru, r_area, r_arc);

    for (int iter = 0; iter < max_iter; ++iter) {
        if (!std::isfinite(norm)) return res;
        if (norm <= tol) {
            res.u = std::move(u);
            res.a = a;
            res.A = A;
            res.converged = true;
            return res;
        }

        LinearFactor lu(jacobian(pa, u));

        // dF/da by central differences; the u-block stays analytic.
        const double h = 1e-6 * std::max(1.0, std::abs(a));
        std::vector<double> c_a;
        {
            SteadyProblem pp = make_problem(a + h);
            SteadyProblem pm = make_problem(a - h);
            std::vector<double> rp = residual(pp, u);
            std::vector<double> rm = residual(pm, u);
            c_a.resize(rp.size());
            for (size_t i = 0; i < rp.size(); ++i) c_a[i] = (rp[i] - rm[i]) / (2.0 * h);
        }

        std::vector<double> p(ru.size()), q(c_a.size());
        for (size_t i = 0; i < ru.size(); ++i) p[i] = -ru[i];
        for (size_t i = 0; i < c_a.size(); ++i) q[i] = -c_a[i];
        lu.solve_in_place(p);
        lu.solve_in_place(q);

        // area row: w^T du + (trapz/a) da - dA = -r_area
        const double dx = pa.grid.dx;
        auto wdot = [&](const std::vector<double>& v) {
            double s = 0.5 * (v.front() + v.back());
            for (int i = 1; i < n; ++i) s += v[i];
            return s * dx;
        };
        const double s_a = (l1_norm(pa.grid, u)) / a;
        const double alpha = wdot(q) + s_a;
        const double rhs2 = -r_area - wdot(p);
        // arclength row: 2 (a-a0) da + 2 (A-A0) dA = -r_arc
        const double ba = 2.0 * (a - prev.a);
        const double bA = 2.0 * (A - prev.A);
        const double det = alpha * bA + ba;
        if (det == 0.0 || !std::isfinite(det)) return res;
        const double da = (rhs2 * bA - r_arc) / det;
        const double dA = (alpha * (-r_arc) - ba * rhs2) / det;

        // damped update, residual-monotone on the full augmented system
        double lambda = 1.0;
        Profile trial(u.size());
        std::vector<double> rt;
        double a_t = a, A_t = A, n_t = 0.0, area_t = 0.0, arc_t = 0.0;
        SteadyProblem pt = pa;
        bool improved = false;
        for (int hlv = 0; hlv <= 6; ++hlv) {
            a_t = a + lambda * da;
            A_t = A + lambda * dA;
            if (a_t > 0.0) {
                for (size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + lambda * (p[i] + q[i] * da);
                pt = make_problem(a_t);
                rt = residual(pt, trial);
                area_t = l1_norm(pt.grid, trial) - A_t;
                arc_t = (a_t - prev.a) * (a_t - prev.a) + (A_t - prev.A) * (A_t - prev.A) -
                        ds * ds;
                n_t = full_norm(rt, area_t, arc_t);
                if (std::isfinite(n_t) && n_t < norm) {
                    improved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!improved) return res; // stagnation: reject the step
        u.swap(trial);
        a = a_t;
        A = A_t;
        pa = std::move(pt);
        ru.swap(rt);
        r_area = area_t;
        r_arc = arc_t;
        norm = n_t;
    }
    return res;
}

BranchPoint make_point(const Params& base, int n, Profile u, double a) {
    Params p = base;
    p.a = a;
    const Grid g = build_grid(p, n);
    BranchPoint bp;
    bp.a = a;
    bp.A = l1_norm(g, u);
    bp.peaks = count_peaks(u, 0.1, p.bc);
    bp.profile = std::move(u);
    return bp;
}

void annotate_stability(const Params& base, int n, BranchPoint& bp, EigMode mode,
                        std::optional<double> hint) {
    Params p = base;
    p.a = bp.a;
    SteadyProblem sp = SteadyProblem::make(p, n);
    StabilityResult st = solve_stability(sp, bp.profile, mode, 6, hint);
    bp.sigma_max = st.sigma_max;
    bp.stable = (st.classification == StabilityClass::stable);
}

// Quadratic vertex of a(s) through three samples; returns the stationary s.
std::optional<double> quad_vertex(double s0, double a0, double s1, double a1, double s2,
                                  double a2) {
    const double d01 = (a1 - a0) / (s1 - s0);
    const double d12 = (a2 - a1) / (s2 - s1);
    const double curv = (d12 - d01) / (s2 - s0);
    if (curv == 0.0) return std::nullopt;
    const double mid01 = 0.5 * (s0 + s1);
    const double vertex = mid01 - d01 / (2.0 * curv);
    return vertex;
}

double quad_eval(double s0, double v0, double s1, double v1, double s2, double v2, double s) {
    // Lagrange form
    const double l0 = (s - s1) * (s - s2) / ((s0 - s1) * (s0 - s2));
    const double l1 = (s - s0) * (s - s2) / ((s1 - s0) * (s1 - s2));
    const double l2 = (s - s0) * (s - s1) / ((s2 - s0) * (s2 - s1));
    return v0 * l0 + v1 * l1 + v2 * l2;
}

} // namespace

std::vector<double> augmented_residual(const SteadyProblem& base, const Profile& u, double a,
                                       double A, const BranchPoint& prev, double ds) {
    Params p = base.params;
    p.a = a;
    SteadyProblem pa = SteadyProblem::make(p, base.grid.n);
    std::vector<double> r = residual(pa, u);
    r.push_back(l1_norm(pa.grid, u) - A);
    r.push_back((a - prev.a) * (a - prev.a) + (A - prev.A) * (A - prev.A) - ds * ds);
    return r;
}

PredictorState predict(const BranchPoint& prev2, const BranchPoint& prev, double ds) {
    const double da = prev.a - prev2.a;
    const double dA = prev.A - prev2.A;
    const double len = hypot2(da, dA);
    if (len == 0.0)
        throw std::invalid_argument("predict: coincident history points give no tangent");
    if (prev.profile.empty() || prev2.profile.empty())
        throw std::invalid_argument("predict: history points must retain profiles");
    const double scale = ds / len;
    PredictorState g;
    g.a = prev.a + da * scale;
    g.A = prev.A + dA * scale;
    g.u.resize(prev.profile.size());
    for (size_t i = 0; i < g.u.size(); ++i)
        g.u[i] = prev.profile[i] + (prev.profile[i] - prev2.profile[i]) * scale;
    return g;
}

BranchPoint seed_from_profile(const Params& p, int n, Profile guess, double newton_tol) {
    SteadyProblem sp = SteadyProblem::make(p, n);
    NewtonOptions no;
    no.tol_residual = newton_tol;
    Profile u = newton_solve(sp, std::move(guess), no);
    return make_point(p, n, std::move(u), p.a);
}

BranchPoint seed_from_closed_form(const Params& p, int n) {
    if (p.bc == Bc::dirichlet) {
        const Grid g = build_grid(p, n);
        if (p.a <= 0.5) return seed_from_profile(p, n, closed_form_dirichlet(p, g));
        // For D >= 1/(4 pi^2) the transcritical point a = pi sqrt(D) lies above
        // 1/2 and no exact formula applies; seed from a single-mode guess with
        // the continued closed-form amplitude instead.
        const double pi = std::numbers::pi;
        if (p.a * p.a <= pi * pi * p.D + 1e-12)
            throw std::domain_error(
                "continuation seed: a must exceed the bifurcation value pi sqrt(D)");
        const double amp = (pi / (2.0 * p.a)) * (1.0 - pi * pi * p.D / (p.a * p.a));
        Profile guess(g.size());
        for (int i = 0; i <= g.n; ++i) guess[i] = amp * std::sin(pi * g.x[i] / p.a);
        BranchPoint bp = seed_from_profile(p, n, guess);
        if (bp.A < 0.05 * amp * p.a)
            throw std::domain_error(
                "continuation seed: Newton collapsed to the trivial state; start further "
                "from the bifurcation");
        return bp;
    }
    // Neumann: the constant state 1/a is exact for a <= 1/2
    if (p.a > 0.5)
        throw std::domain_error("continuation seed: Neumann constant state requires a <= 1/2");
    return seed_from_profile(p, n, Profile(n + 1, 1.0 / p.a));
}

BranchPoint seed_from_small_d(const Params& p, int n, int r) {
    const Grid g = build_grid(p, n);
    return seed_from_profile(p, n, small_d_profile(g, p.a, p.D, r, p.bc));
}

Branch trace(const Params& params, int n, const BranchPoint& seed, const ContinuationOptions& opts) {
    validate(params);
    if (!(opts.ds_min <= opts.ds_init && opts.ds_init <= opts.ds_max))
        throw std::invalid_argument("continuation: need ds_min <= ds_init <= ds_max");
    if (seed.profile.empty())
        throw std::invalid_argument("continuation: seed must carry its profile");

    Branch br;
    br.params = params;
    br.n = n;
    br.opts = opts;
    br.points.push_back(seed);
    br.points.back().s = 0.0;

    auto retain_window = [&](size_t k) {
        // keep the trailing window (predictor + fold refinement) and the stride samples
        if (br.points.size() < 8) return;
        size_t old = br.points.size() - 8;
        if (old == 0) return; // always keep the seed profile
        BranchPoint& bp = br.points[old];
        const bool keep = bp.is_fold || (opts.profile_stride > 0 &&
                                         old % static_cast<size_t>(opts.profile_stride) == 0);
        if (!keep) {
            bp.profile.clear();
            bp.profile.shrink_to_fit();
        }
        (void)k;
    };

    double ds = opts.ds_init;
    std::optional<double> sigma_hint;
    bool done = false;
    while (!done && static_cast<int>(br.points.size()) < opts.max_points) {
        const BranchPoint& prev = br.points.back();
        if (opts.direction > 0 && prev.a >= opts.a_stop) break;
        if (opts.direction < 0 && prev.a <= opts.a_stop) break;

        PredictorState guess;
        if (br.points.size() == 1) {
            guess.u = prev.profile;
            guess.a = prev.a + opts.direction * ds;
            Params pg = params;
            pg.a = guess.a;
            guess.A = l1_norm(build_grid(pg, n), guess.u);
        } else {
            guess = predict(br.points[br.points.size() - 2], prev, ds);
        }

        const double pred_da = guess.a - prev.a;
        const double pred_dA = guess.A - prev.A;
        AugmentedResult res;
        try {
            res = solve_augmented(params, n, std::move(guess), prev, ds, opts.newton_max_iter,
                                  opts.newton_tol);
        } catch (const SingularJacobianError&) {
            res.converged = false;
        }
        if (res.converged) {
            // orientation guard: the corrector must not double back onto the
            // incoming branch (the arclength constraint admits both directions)
            const double dot = (res.a - prev.a) * pred_da + (res.A - prev.A) * pred_dA;
            if (!(dot > 0.0)) res.converged = false;
        }
        if (!res.converged) {
            ++br.newton_failures;
            ds *= opts.shrink;
            if (ds < opts.ds_min) {
                br.stall_reason = "step size fell below ds_min near (a, A) = (" +
                                  std::to_string(prev.a) + ", " + std::to_string(prev.A) + ")";
                done = true;
            }
            continue;
        }

        BranchPoint bp = make_point(params, n, std::move(res.u), res.a);
        bp.ds_used = ds;
        bp.s = prev.s + hypot2(bp.a - prev.a, bp.A - prev.A);
        const size_t k = br.points.size();
        if (opts.stability_stride > 0 && k % static_cast<size_t>(opts.stability_stride) == 0) {
            annotate_stability(params, n, bp, opts.eig_mode, sigma_hint);
            sigma_hint = bp.sigma_max;
        }
        br.points.push_back(std::move(bp));

        // fold detection on the trailing three points
        if (br.points.size() >= 3) {
            BranchPoint& p2 = br.points[br.points.size() - 3];
            BranchPoint& p1 = br.points[br.points.size() - 2];
            BranchPoint& p0 = br.points.back();
            const double d1 = p1.a - p2.a;
            const double d0 = p0.a - p1.a;
            if (d1 * d0 < 0.0 && (std::abs(d1) > 1e-12 || std::abs(d0) > 1e-12)) {
                p1.is_fold = true;
                FoldInfo fi;
                fi.index = static_cast<int>(br.points.size() - 2);
                fi.a = p1.a;
                fi.A = p1.A;
                fi.s = p1.s;
                if (const auto sv = quad_vertex(p2.s, p2.a, p1.s, p1.a, p0.s, p0.a);
                    sv && *sv > p2.s && *sv < p0.s) {
                    fi.s = *sv;
                    fi.a = quad_eval(p2.s, p2.a, p1.s, p1.a, p0.s, p0.a, *sv);
                    fi.A = quad_eval(p2.s, p2.A, p1.s, p1.A, p0.s, p0.A, *sv);
                }
                bool refined = false;
                if (opts.refine_folds && !p2.profile.empty() && !p1.profile.empty()) {
                    // Re-solve at the interpolated arclength to land on the fold.
                    const BranchPoint& anchor = (fi.s >= p1.s) ? p1 : p2;
                    const double ds_f = fi.s - anchor.s;
                    if (ds_f > 16.0 * opts.ds_min) {
                        PredictorState g;
                        const double theta = (fi.s - p2.s) / (p0.s - p2.s);
                        g.a = fi.a;
                        g.A = fi.A;
                        g.u.resize(p1.profile.size());
                        const Profile& ua = p2.profile;
                        const Profile& ub = p0.profile.empty() ? p1.profile : p0.profile;
                        for (size_t i = 0; i < g.u.size(); ++i)
                            g.u[i] = (1.0 - theta) * ua[i] + theta * ub[i];
                        AugmentedResult fr = solve_augmented(params, n, std::move(g), anchor,
                                                             ds_f, opts.newton_max_iter,
                                                             opts.newton_tol);
                        if (fr.converged) {
                            Params pf = params;
                            pf.a = fr.a;
                            fi.a = fr.a;
                            fi.A = l1_norm(build_grid(pf, n), fr.u);
                            if (opts.stability_stride > 0) {
                                SteadyProblem sp = SteadyProblem::make(pf, n);
                                fi.sigma_max =
                                    solve_stability(sp, fr.u, opts.eig_mode, 6, 0.0).sigma_max;
                            }
                        }
                    }
                }
                br.folds.push_back(fi);
            }
        }

        retain_window(k);
        ds = std::min(ds * opts.grow, opts.ds_max);
    }
    if (static_cast<int>(br.points.size()) >= opts.max_points && br.stall_reason.empty())
        br.stall_reason = "max_points reached";
    return br;
}

std::vector<FoldInfo> detect_folds(const Branch& branch) {
    std::vector<FoldInfo> folds;
    const auto& pts = branch.points;
    for (size_t k = 2; k < pts.size(); ++k) {
        const double d1 = pts[k - 1].a - pts[k - 2].a;
        const double d0 = pts[k].a - pts[k - 1].a;
        if (d1 * d0 < 0.0 && (std::abs(d1) > 1e-12 || std::abs(d0) > 1e-12)) {
            FoldInfo fi;
            fi.index = static_cast<int>(k - 1);
            fi.a = pts[k - 1].a;
            fi.A = pts[k - 1].A;
            fi.s = pts[k - 1].s;
            if (const auto sv = quad_vertex(pts[k - 2].s, pts[k - 2].a, pts[k - 1].s,
                                            pts[k - 1].a, pts[k].s, pts[k].a);
                sv && *sv > pts[k - 2].s && *sv < pts[k].s) {
                fi.s = *sv;
                fi.a = quad_eval(pts[k - 2].s, pts[k - 2].a, pts[k - 1].s, pts[k - 1].a,
                                 pts[k].s, pts[k].a, *sv);
                fi.A = quad_eval(pts[k - 2].s, pts[k - 2].A, pts[k - 1].s, pts[k - 1].A,
                                 pts[k].s, pts[k].A, *sv);
            }
            folds.push_back(fi);
        }
    }
    return folds;
}

BranchPoint cusp_restart(const Params& params, int n, const BranchPoint& seed, double target_a,
                         const ContinuationOptions& opts) {
    if (seed.profile.empty())
        throw std::invalid_argument("cusp_restart: seed must carry its profile");
    Profile u = seed.profile;
    double a = seed.a;
    const double total = target_a - a;
    double da = (total == 0.0) ? 0.0 : std::copysign(std::min(0.05, std::abs(total)), total);

    NewtonOptions no;
    no.tol_residual = opts.newton_tol;
    no.max_iter = 30;

    while (a != target_a) {
        double a_try = a + da;
        if ((da > 0.0 && a_try > target_a) || (da < 0.0 && a_try < target_a)) a_try = target_a;
        Params p = params;
        p.a = a_try;
        try {
            SteadyProblem sp = SteadyProblem::make(p, n);
            u = newton_solve(sp, u, no);
            a = a_try;
            da = std::copysign(std::min(std::abs(da) * 1.5, 0.1), total);
        } catch (const std::runtime_error&) { // non-convergence or singular solve
            da *= 0.5;
            if (std::abs(da) < 1e-5 * std::max(1.0, std::abs(a)))
                throw StallError("cusp_restart: natural continuation stalled at a = " +
                                 std::to_string(a));
        }
    }
    return make_point(params, n, std::move(u), target_a);
}

} // namespace fkpp
