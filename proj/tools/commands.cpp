#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <thread>

#include <json.hpp>

namespace fkpp::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using clock_type = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

double elapsed(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string bc_name(Bc bc) { return bc == Bc::dirichlet ? "dirichlet" : "neumann"; }

void write_json(const fs::path& path, const ordered_json& j) {
    io::write_text_atomic(path, j.dump(2) + "\n");
}

std::string class_name(StabilityClass c) {
    switch (c) {
        case StabilityClass::stable: return "stable";
        case StabilityClass::unstable: return "unstable";
        default: return "marginal";
    }
}

Profile load_profile(const std::string& file, const Grid& g) {
    io::ProfileFile f = io::read_profile_csv(file);
    if (static_cast<int>(f.u.size()) == g.size()) return f.u;
    return io::resample(f, g);
}

Profile initial_guess(const SteadyConfig& cfg, const SteadyProblem& sp) {
    if (cfg.guess == "closed-form") {
        if (sp.params.bc == Bc::dirichlet) return closed_form_dirichlet(sp.params, sp.grid);
        if (sp.params.a > 0.5)
            throw std::invalid_argument(
                "steady: closed-form Neumann guess requires a <= 1/2 (use --guess constant/file)");
        return Profile(sp.grid.size(), 1.0 / sp.params.a);
    }
    if (cfg.guess == "constant") return Profile(sp.grid.size(), cfg.guess_constant);
    if (cfg.guess == "file") return load_profile(cfg.guess_file, sp.grid);
    throw std::invalid_argument("steady: unknown guess kind '" + cfg.guess + "'");
}

} // namespace

Params to_params(const CommonConfig& c) {
    Params p;
    p.a = c.a;
    p.D = c.D;
    if (c.bc == "dirichlet")
        p.bc = Bc::dirichlet;
    else if (c.bc == "neumann")
        p.bc = Bc::neumann;
    else
        throw std::invalid_argument("bc must be 'dirichlet' or 'neumann' (got '" + c.bc + "')");
    validate(p);
    return p;
}

void report_error(const fs::path& dir, const std::string& kind, const std::string& message) {
    std::cerr << "error (" << kind << "): " << message << "\n";
    try {
        ordered_json j;
        j["error"] = kind;
        j["message"] = message;
        write_json(dir / "error.json", j);
    } catch (...) {
        // the error report must never mask the original failure
    }
}

int cmd_steady(const SteadyConfig& cfg) {
    const auto t0 = clock_type::now();
    const Params p = to_params(cfg.common);
    SteadyProblem sp = SteadyProblem::make(p, cfg.common.n);
    NewtonOptions no;
    no.tol_residual = cfg.tol;

    Profile u = newton_solve(sp, initial_guess(cfg, sp), no);
    const double res_norm = inf_norm(residual(sp, u));

    const fs::path out = cfg.common.out;
    io::write_profile_csv(out / "profile.csv", sp.grid, u);
    ordered_json j;
    j["a"] = p.a;
    j["D"] = p.D;
    j["bc"] = bc_name(p.bc);
    j["N"] = cfg.common.n;
    j["L1"] = l1_norm(sp.grid, u);
    j["sup"] = inf_norm(u);
    j["peaks"] = count_peaks(u, 0.1, p.bc);
    j["residual"] = res_norm;
    if (cfg.common.timings) j["wall_time_s"] = elapsed(t0);
    write_json(out / "summary.json", j);
    return kExitOk;
}

namespace {

ContinuationOptions make_cont_options(const ContinueConfig& cfg) {
    ContinuationOptions o;
    o.ds_init = cfg.ds_init;
    o.ds_min = cfg.ds_min;
    o.ds_max = cfg.ds_max;
    o.a_stop = cfg.a_stop;
    o.max_points = cfg.max_points;
    o.profile_stride = cfg.profile_stride;
    o.stability_stride = cfg.stability ? cfg.stability_stride : 0;
    o.eig_mode = EigMode::iterative; // warm-started along the branch
    return o;
}

void write_segment(const fs::path& out, int seg, const Branch& br, bool spectra_wanted,
                   int jobs) {
    char name[64];
    std::snprintf(name, sizeof name, "branch_seg%03d.csv", seg);
    io::write_branch_csv(out / name, br);
    std::snprintf(name, sizeof name, "branch_seg%03d.meta.json", seg);
    io::write_branch_meta_json(out / name, br);

    std::vector<size_t> retained;
    for (size_t k = 0; k < br.points.size(); ++k) {
        const BranchPoint& bp = br.points[k];
        if (bp.profile.empty()) continue;
        retained.push_back(k);
        char pname[80];
        std::snprintf(pname, sizeof pname, "profiles/seg%03d_point%06zu.csv", seg, k);
        Params pp = br.params;
        pp.a = bp.a;
        io::write_profile_csv(out / pname, build_grid(pp, br.n), bp.profile);
    }
    if (!spectra_wanted || retained.empty()) return;

    // full k=6 spectra at the retained points: independent dense solves,
    // delegated to a worker pool after tracing
    std::vector<std::vector<double>> heads(retained.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t i = next.fetch_add(1); i < retained.size(); i = next.fetch_add(1)) {
            const BranchPoint& bp = br.points[retained[i]];
            Params pp = br.params;
            pp.a = bp.a;
            SteadyProblem sp = SteadyProblem::make(pp, br.n);
            heads[i] = solve_stability(sp, bp.profile, EigMode::dense, 6).spectrum_head;
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::vector<std::pair<int, std::vector<double>>> spectra;
    for (size_t i = 0; i < retained.size(); ++i)
        spectra.push_back({static_cast<int>(retained[i]), heads[i]});
    char sname[64];
    std::snprintf(sname, sizeof sname, "spectrum_seg%03d.csv", seg);
    io::write_spectrum_csv(out / sname, spectra);
}

// A stall close behind the head of an r-peak echelon (a ~ r - 1/2) marks the
// stiff subcritical fold that pseudo-arclength cannot turn at small D.
bool stalled_at_cusp(const Branch& br) {
    if (br.stall_reason.empty() || br.points.size() < 3) return false;
    const BranchPoint& last = br.points.back();
    const double head = last.peaks - 0.5;
    return std::abs(last.a - head) < 0.35;
}

} // namespace

int cmd_continue(const ContinueConfig& cfg) {
    const auto t0 = clock_type::now();
    CommonConfig seeded = cfg.common;
    seeded.a = cfg.a0;
    const Params p0 = to_params(seeded);
    const int n = cfg.common.n;
    const fs::path out = cfg.common.out;

    BranchPoint seed;
    if (cfg.seed == "closed-form") {
        seed = seed_from_closed_form(p0, n);
    } else if (cfg.seed == "file") {
        Grid g = build_grid(p0, n);
        seed = seed_from_profile(p0, n, load_profile(cfg.seed_file, g));
    } else {
        throw std::invalid_argument("continue: unknown seed kind '" + cfg.seed + "'");
    }

    ContinuationOptions opts = make_cont_options(cfg);
    std::vector<ordered_json> segment_meta;
    int seg = 0;

    Branch br = trace(p0, n, seed, opts);
    write_segment(out, seg, br, cfg.stability, cfg.common.jobs);
    segment_meta.push_back({{"segment", seg},
                            {"points", br.points.size()},
                            {"stall_reason", br.stall_reason},
                            {"direction", +1}});
    ++seg;

    if (cfg.cusp_restarts) {
        while (stalled_at_cusp(br) && br.points.back().a < cfg.a_stop && seg < 64) {
            const BranchPoint& last = br.points.back();
            const int r_next = last.peaks + 1;
            Params pr = p0;
            pr.a = last.a; // restart on the next echelon at the stall location
            BranchPoint restart = seed_from_small_d(pr, n, r_next);

            ContinuationOptions back = opts;
            back.direction = -1;
            back.a_stop = 0.5 * (r_next - 1) - 0.4; // past the supercritical fold
            Branch bwd = trace(pr, n, restart, back);
            write_segment(out, seg, bwd, cfg.stability, cfg.common.jobs);
            segment_meta.push_back({{"segment", seg},
                                    {"points", bwd.points.size()},
                                    {"stall_reason", bwd.stall_reason},
                                    {"direction", -1},
                                    {"restart_r", r_next}});
            ++seg;

            Branch nxt = trace(pr, n, restart, opts);
            write_segment(out, seg, nxt, cfg.stability, cfg.common.jobs);
            segment_meta.push_back({{"segment", seg},
                                    {"points", nxt.points.size()},
                                    {"stall_reason", nxt.stall_reason},
                                    {"direction", +1},
                                    {"restart_r", r_next}});
            ++seg;
            br = std::move(nxt);
        }
    }

    ordered_json j;
    j["a0"] = cfg.a0;
    j["a_stop"] = cfg.a_stop;
    j["D"] = p0.D;
    j["bc"] = bc_name(p0.bc);
    j["N"] = n;
    j["segments"] = segment_meta;
    j["final_a"] = br.points.back().a;
    if (cfg.common.timings) j["wall_time_s"] = elapsed(t0);
    write_json(out / "run.json", j);
    return kExitOk; // stalls are expected behaviour; partial branches are success
}

namespace {

Profile evolve_ic(const EvolveConfig& cfg, const SteadyProblem& sp, double x0) {
    if (cfg.ic == "bump") return bump_profile(sp.grid, BumpIc{x0, cfg.w, cfg.amp});
    if (cfg.ic == "constant") return Profile(sp.grid.size(), cfg.ic_constant);
    if (cfg.ic == "file") return load_profile(cfg.ic_file, sp.grid);
    if (cfg.ic == "closed-form") {
        if (sp.params.bc == Bc::dirichlet) return closed_form_dirichlet(sp.params, sp.grid);
        return Profile(sp.grid.size(), 1.0 / sp.params.a);
    }
    throw std::invalid_argument("evolve: unknown ic kind '" + cfg.ic + "'");
}

int run_one_evolve(const EvolveConfig& cfg, double x0, const fs::path& out) {
    const auto t0 = clock_type::now();
    const Params p = to_params(cfg.common);
    SteadyProblem sp = SteadyProblem::make(p, cfg.common.n);
    Profile u0 = evolve_ic(cfg, sp, x0);

    EvolveOptions eo;
    eo.fixed_dt = cfg.fixed_dt;
    Trajectory traj;
    try {
        traj = run_ivp(sp, u0, cfg.t_end, cfg.snapshot_times, eo);
    } catch (const BlowUpError& e) {
        io::write_profile_csv(out / "last_state.csv", sp.grid, e.last_state);
        report_error(out, "blow-up", e.what());
        return kExitBlowUp;
    }

    for (size_t k = 0; k < traj.snapshots.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%03zu.csv", k);
        io::write_profile_csv(out / name, sp.grid, traj.snapshots[k]);
    }
    io::write_profile_csv(out / "final.csv", sp.grid, traj.final_state);

    ordered_json j;
    j["a"] = p.a;
    j["D"] = p.D;
    j["bc"] = bc_name(p.bc);
    j["N"] = cfg.common.n;
    j["ic"] = {{"kind", cfg.ic}, {"x0", x0}, {"w", cfg.w}, {"amp", cfg.amp}};
    j["t_end"] = traj.t_end;
    j["steps"] = traj.steps;
    j["reached_steady"] = traj.reached_steady;
    j["terminal_residual"] = traj.terminal_residual;
    j["terminal_peaks"] = traj.terminal_peaks;
    j["terminal_L1"] = l1_norm(sp.grid, traj.final_state);
    if (cfg.common.timings) j["wall_time_s"] = elapsed(t0);
    write_json(out / "summary.json", j);
    return kExitOk;
}

} // namespace

int cmd_evolve(const EvolveConfig& cfg) {
    const fs::path out = cfg.common.out;
    if (cfg.x0_list.empty()) return run_one_evolve(cfg, cfg.x0, out);

    // independent runs over x0 execute concurrently, capped by --jobs
    const int jobs = std::max(1, cfg.common.jobs);
    std::atomic<size_t> next{0};
    std::vector<int> rc(cfg.x0_list.size(), kExitOk);
    auto worker = [&]() {
        for (size_t i = next.fetch_add(1); i < cfg.x0_list.size(); i = next.fetch_add(1)) {
            char name[64];
            std::snprintf(name, sizeof name, "x0_%g", cfg.x0_list[i]);
            rc[i] = run_one_evolve(cfg, cfg.x0_list[i], out / name);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (int r : rc)
        if (r != kExitOk) return r;
    return kExitOk;
}

int cmd_stability(const StabilityConfig& cfg) {
    const auto t0 = clock_type::now();
    const Params p = to_params(cfg.common);
    SteadyProblem sp = SteadyProblem::make(p, cfg.common.n);

    Profile u;
    if (cfg.seed == "closed-form") {
        if (p.bc == Bc::dirichlet)
            u = newton_solve(sp, closed_form_dirichlet(p, sp.grid));
        else if (p.a <= 0.5)
            u = Profile(sp.grid.size(), 1.0 / p.a);
        else
            throw std::invalid_argument("stability: closed-form Neumann seed requires a <= 1/2");
    } else if (cfg.seed == "constant") {
        u = newton_solve(sp, Profile(sp.grid.size(), cfg.seed_constant));
    } else if (cfg.seed == "file") {
        u = newton_solve(sp, load_profile(cfg.seed_file, sp.grid));
    } else {
        throw std::invalid_argument("stability: unknown seed kind '" + cfg.seed + "'");
    }

    const EigMode mode = (cfg.mode == "iterative") ? EigMode::iterative : EigMode::dense;
    StabilityResult st = solve_stability(sp, u, mode, cfg.k);

    const fs::path out = cfg.common.out;
    io::write_profile_csv(out / "steady.csv", sp.grid, u);
    io::write_profile_csv(out / "eigenvector.csv", sp.grid, st.eigenvector);
    io::write_spectrum_csv(out / "spectrum.csv", {{0, st.spectrum_head}});

    ordered_json j;
    j["a"] = p.a;
    j["D"] = p.D;
    j["bc"] = bc_name(p.bc);
    j["N"] = cfg.common.n;
    j["sigma_max"] = st.sigma_max;
    j["classification"] = class_name(st.classification);
    j["symmetry_defect"] = st.symmetry_defect;
    j["max_imag"] = st.max_imag;
    j["iterative_fallback"] = st.iterative_fallback;
    if (cfg.common.timings) j["wall_time_s"] = elapsed(t0);
    write_json(out / "summary.json", j);
    return kExitOk;
}

int cmd_sweep_hysteresis(const SweepConfig& cfg) {
    const auto t0 = clock_type::now();
    if (!(cfg.a_step > 0.0)) throw std::invalid_argument("sweep: a_step must be positive");
    if (!(cfg.a_to >= cfg.a_from)) throw std::invalid_argument("sweep: need a_to >= a_from");
    const Params base = to_params(cfg.common);
    if (base.D >= 0.00297)
        std::cerr << "warning: sweep-hysteresis expects D below ~0.00297; overlapping stable "
                     "branches may be absent\n";

    std::vector<std::pair<int, double>> schedule; // (pass, a): pass 0 = up, 1 = down
    for (double a = cfg.a_from; a < cfg.a_to + 0.5 * cfg.a_step; a += cfg.a_step)
        schedule.push_back({0, std::min(a, cfg.a_to)});
    for (double a = cfg.a_to - cfg.a_step; a > cfg.a_from - 0.5 * cfg.a_step; a -= cfg.a_step)
        schedule.push_back({1, std::max(a, cfg.a_from)});

    std::string csv = "pass,a,A,peaks,sigma_max\n";
    Profile carry; // previous attractor, carried by stretching with the mesh
    const int n = cfg.common.n;

    for (const auto& [pass, a] : schedule) {
        Params p = base;
        p.a = a;
        SteadyProblem sp = SteadyProblem::make(p, n);

        Profile u0;
        if (carry.empty()) {
            if (cfg.ic == "bump") {
                const double x0 = cfg.x0 < 0.0 ? 0.5 * a : cfg.x0;
                u0 = bump_profile(sp.grid, BumpIc{x0, cfg.w, cfg.amp});
            } else if (cfg.ic == "file") {
                u0 = load_profile(cfg.ic_file, sp.grid);
            } else {
                throw std::invalid_argument("sweep: unknown ic kind '" + cfg.ic + "'");
            }
        } else {
            // adiabatic transport: node values stay put while the mesh stretches
            // with a, so the carried state tracks its own branch until a fold
            u0 = carry;
        }

        // evolve to quasi-steady, then polish with Newton and verify stability
        EvolveOptions eo;
        eo.steady_tol = cfg.quasi_steady_tol;
        eo.steady_span = 50;
        Trajectory traj = run_ivp(sp, u0, cfg.t_max, {}, eo);
        Profile us = newton_solve(sp, traj.final_state);
        StabilityResult st = solve_stability(sp, us, EigMode::dense, 3);

        const int peaks = count_peaks(us, 0.1, base.bc);
        csv += std::to_string(pass) + "," + io::format_double(a) + "," +
               io::format_double(l1_norm(sp.grid, us)) + "," + std::to_string(peaks) + "," +
               io::format_double(st.sigma_max) + "\n";
        carry = us;
    }

    const fs::path out = cfg.common.out;
    io::write_text_atomic(out / "sweep.csv", csv);
    ordered_json j;
    j["a_from"] = cfg.a_from;
    j["a_to"] = cfg.a_to;
    j["a_step"] = cfg.a_step;
    j["D"] = base.D;
    j["bc"] = bc_name(base.bc);
    j["N"] = n;
    j["points"] = schedule.size();
    if (cfg.common.timings) j["wall_time_s"] = elapsed(t0);
    write_json(out / "summary.json", j);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validation suite

namespace {

struct Validator {
    std::vector<io::ValidationRecord> records;

    void check(const std::string& quantity, double numeric, double oracle, double tolerance,
               bool relative = false) {
        io::ValidationRecord r;
        r.quantity = quantity;
        r.numeric = numeric;
        r.oracle = oracle;
        r.abs_err = std::abs(numeric - oracle);
        r.rel_err = oracle != 0.0 ? r.abs_err / std::abs(oracle) : r.abs_err;
        r.tolerance = tolerance;
        r.pass = (relative ? r.rel_err : r.abs_err) <= tolerance;
        records.push_back(r);
    }

    bool all_pass() const {
        for (const auto& r : records)
            if (!r.pass) return false;
        return true;
    }
};

} // namespace

int cmd_validate(const ValidateConfig& cfg) {
    const int n = cfg.common.n;
    Validator v;

    { // derived constants
        DeltaConstants dc = delta_constants();
        v.check("root of 6 tanh(l/2) = l", dc.l, 5.9694, 1e-3);
        v.check("delta_m = 2 l^-3 sinh(l/2)", dc.delta_m, 0.0928, 1e-3);
        v.check("bisection residual", 6.0 * std::tanh(0.5 * dc.l) - dc.l, 0.0, 1e-10);
    }
    { // convolution row sums are exact for constants
        Params p{1.7, 0.01, Bc::dirichlet};
        Grid g = build_grid(p, n);
        ConvolutionOperator conv = build_convolution(g, p);
        Profile ones(g.size(), 1.0);
        auto r = conv.apply_weights(ones);
        double worst = 0.0;
        for (int i = 0; i <= g.n; ++i)
            worst = std::max(worst, std::abs(r[i] - (conv.beta(i) - conv.alpha(i))));
        v.check("convolution constant-exactness", worst, 0.0, 1e-13);
    }
    { // O(dx^2) for convolution and second derivative, u = cos(3y) on a = 3
        Params p{3.0, 0.01, Bc::dirichlet};
        auto max_err = [&](int nn) {
            Grid g = build_grid(p, nn);
            ConvolutionOperator conv = build_convolution(g, p);
            Profile u(g.size());
            for (int i = 0; i <= g.n; ++i) u[i] = std::cos(3.0 * g.x[i]);
            auto kd = conv.apply(u);
            double e_conv = 0.0, e_der = 0.0;
            for (int i = 0; i <= g.n; ++i) {
                const double exact =
                    (std::sin(3.0 * conv.beta(i)) - std::sin(3.0 * conv.alpha(i))) / 3.0;
                e_conv = std::max(e_conv, std::abs(kd[i] - exact));
            }
            auto d2 = second_derivative(g, u, Bc::dirichlet);
            for (int i = 1; i < g.n; ++i) e_der = std::max(e_der, std::abs(d2[i] + 9.0 * u[i]));
            return std::pair{e_conv, e_der};
        };
        auto [c1, d1] = max_err(n);
        auto [c2, d2] = max_err(2 * n);
        v.check("convolution refinement ratio", c1 / c2, 4.0, 0.5);
        v.check("second-derivative refinement ratio", d1 / d2, 4.0, 0.5);
    }
    { // closed-form Dirichlet steady state
        Params p{0.45, 0.01, Bc::dirichlet};
        SteadyProblem sp = SteadyProblem::make(p, n);
        Profile cf = closed_form_dirichlet(p, sp.grid);
        Profile guess = cf;
        for (double& x : guess) x *= 1.1;
        Profile u = newton_solve(sp, guess);
        double err = 0.0;
        for (size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u[i] - cf[i]));
        v.check("Newton vs closed-form profile (rel sup)", err / inf_norm(cf), 0.0, 2e-5);
        v.check("L1 norm vs 1 - pi^2 D / a^2", l1_norm(sp.grid, u),
                1.0 - kPi * kPi * p.D / (p.a * p.a), 1e-5);
    }
    { // Neumann constant state is exact
        Params p{0.4, 0.01, Bc::neumann};
        SteadyProblem sp = SteadyProblem::make(p, n);
        Profile u(sp.grid.size(), 1.0 / p.a);
        v.check("Neumann constant-state residual", inf_norm(residual(sp, u)), 0.0, 1e-12);
    }
    { // trivial-state Dirichlet spectrum
        Params p{1.0, 0.05, Bc::dirichlet};
        SteadyProblem sp = SteadyProblem::make(p, n);
        StabilityResult st = solve_stability(sp, Profile(sp.grid.size(), 0.0), EigMode::dense, 4);
        for (int m = 1; m <= 4; ++m)
            v.check("trivial spectrum n=" + std::to_string(m), st.spectrum_head[m - 1],
                    1.0 - m * m * kPi * kPi * p.D / (p.a * p.a), 1e-3);
    }
    { // analytic Jacobian vs finite differences
        Params p{3.0, 2e-3, Bc::dirichlet};
        SteadyProblem sp = SteadyProblem::make(p, std::min(n, 300));
        Profile u(sp.grid.size()), dv(sp.grid.size());
        for (int i = 0; i < sp.grid.size(); ++i) {
            u[i] = 1.0 + 0.5 * std::sin(7.3 * i);
            dv[i] = std::cos(3.1 * i);
        }
        u[0] = u[sp.grid.n] = 0.0;
        auto J = jacobian(sp, u);
        auto jv = J.multiply(dv);
        const double eps = 1e-7;
        Profile up = u, um = u;
        for (size_t i = 0; i < u.size(); ++i) {
            up[i] += eps * dv[i];
            um[i] -= eps * dv[i];
        }
        auto rp = residual(sp, up), rm = residual(sp, um);
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < u.size(); ++i) {
            num = std::max(num, std::abs((rp[i] - rm[i]) / (2.0 * eps) - jv[i]));
            den = std::max(den, std::abs(jv[i]));
        }
        v.check("Jacobian vs finite differences (rel)", num / den, 0.0, 1e-5);
    }

    if (!cfg.quick) {
        for (Bc bc : {Bc::dirichlet, Bc::neumann}) { // series oracle vs time integration
            Params p{0.4, 0.01, bc};
            SteadyProblem sp = SteadyProblem::make(p, std::min(n, 600));
            Profile u0(sp.grid.size());
            for (int i = 0; i <= sp.grid.n; ++i) {
                const double x = sp.grid.x[i];
                u0[i] = bc == Bc::dirichlet
                            ? std::sin(kPi * x / p.a) + 0.3 * std::sin(2.0 * kPi * x / p.a)
                            : 1.0 + 0.4 * std::cos(kPi * x / p.a) +
                                  0.2 * std::cos(3.0 * kPi * x / p.a);
            }
            Trajectory traj = run_ivp(sp, u0, 1.0, {1.0});
            Profile ex = bc == Bc::dirichlet ? dirichlet_series(p.a, p.D, sp.grid, u0, 1.0)
                                             : neumann_series(p.a, p.D, sp.grid, u0, 1.0);
            double err = 0.0;
            for (size_t i = 0; i < ex.size(); ++i)
                err = std::max(err, std::abs(ex[i] - traj.snapshots[0][i]));
            v.check(std::string(bc == Bc::dirichlet ? "Dirichlet" : "Neumann") +
                        " evolve vs series (sup, t=1)",
                    err, 0.0, 1e-4);
            if (bc == Bc::dirichlet) {
                DirichletSeries s(p.a, p.D, sp.grid, u0);
                double jid = 0.0, mid = 0.0;
                for (double t : {0.4, 1.1, 2.3}) {
                    const double h = 1e-2;
                    const double jp = (-s.J(t + 2 * h) + 8.0 * s.J(t + h) - 8.0 * s.J(t - h) +
                                       s.J(t - 2 * h)) /
                                      (12.0 * h);
                    jid = std::max(jid, std::abs(jp - s.J(t) + p.a * s.J(t) * s.J(t) * s.G(t)));
                    mid = std::max(mid, std::abs(s.mean(t) - s.J(t) * s.G(t)));
                }
                v.check("Bernoulli identity |J' - J + a J^2 G|", jid, 0.0, 1e-8);
                v.check("mean identity |mean - J G|", mid, 0.0, 1e-8);
            }
        }
        { // large-D composite at the midpoint
            Params p{3.0, 1000.0, Bc::neumann};
            SteadyProblem sp = SteadyProblem::make(p, n);
            NewtonOptions no;
            no.tol_residual = 1e-7; // residual floor at D/dx^2 ~ 1e8 rounding noise
            Profile u =
                newton_solve(sp, Profile(sp.grid.size(), large_d_core_constant(p.a)), no);
            v.check("large-D composite midpoint (rel)", u[sp.grid.n / 2],
                    large_d_midpoint(p.a, p.D), 1e-2, true);
        }
        { // small-D branch norm and the Neumann boundary-peak ratio
            Params p{2.6, 1e-5, Bc::dirichlet};
            SteadyProblem sp = SteadyProblem::make(p, n);
            Profile u = newton_solve(sp, small_d_profile(sp.grid, p.a, p.D, 5, p.bc));
            v.check("small-D echelon L1 (rel, r=5)", l1_norm(sp.grid, u),
                    small_d_branch_norm(p.a, p.D, 5, p.bc), 0.01, true);

            Params q{2.75, 1e-5, Bc::neumann};
            SteadyProblem sq = SteadyProblem::make(q, n);
            Profile w = newton_solve(sq, small_d_profile(sq.grid, q.a, q.D, 4, q.bc));
            double interior = 0.0; // interior arches live in (0.5, a - 0.5)
            for (int i = 0; i <= sq.grid.n; ++i)
                if (sq.grid.x[i] > 0.5 && sq.grid.x[i] < q.a - 0.5)
                    interior = std::max(interior, w[i]);
            v.check("Neumann boundary/interior peak ratio (rel)", w[0] / interior,
                    std::numbers::sqrt2, 0.02, true);
        }
        { // explicit midpoint is second order (uniform Neumann run vs logistic)
            Params p{0.4, 0.01, Bc::neumann};
            SteadyProblem sp = SteadyProblem::make(p, 128);
            const double c0 = 2.0;
            auto exact = [&](double t) {
                const double e = std::exp(t);
                return c0 * e / (1.0 + p.a * c0 * (e - 1.0));
            };
            double err[2];
            const double hs[2] = {2e-3, 1e-3};
            for (int k = 0; k < 2; ++k) {
                EvolveOptions eo;
                eo.fixed_dt = hs[k];
                Trajectory tr = run_ivp(sp, Profile(sp.grid.size(), c0), 1.0, {}, eo);
                err[k] = std::abs(tr.final_state[64] - exact(tr.t_end));
            }
            v.check("midpoint order (error ratio dt vs dt/2)", err[0] / err[1], 4.0, 1.0);
        }
    }

    const fs::path out = cfg.common.out;
    io::write_validation_report(out / "report.json", v.records);
    for (const auto& r : v.records)
        std::printf("%-46s %-5s numeric=%- .9g oracle=%- .9g abs=%.3g rel=%.3g tol=%.3g\n",
                    r.quantity.c_str(), r.pass ? "PASS" : "FAIL", r.numeric, r.oracle, r.abs_err,
                    r.rel_err, r.tolerance);
    const bool ok = v.all_pass();
    std::printf("validate: %s (%zu checks)\n", ok ? "all passed" : "FAILURES PRESENT",
                v.records.size());
    return ok ? kExitOk : kExitValidation;
}

} // namespace fkpp::cli
