#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "fkpp/errors.hpp"

namespace {

using nlohmann::json;
using namespace fkpp::cli;

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream is(path);
    if (!is) throw CLI::ValidationError("--config", "cannot open config file " + path);
    json j;
    is >> j;
    if (!j.is_object()) throw CLI::ValidationError("--config", "config must be a JSON object");
    return j;
}

// Flags given on the command line override config-file values.
template <typename T>
void merge(const CLI::App* app, const json& j, const std::string& flag, const char* key,
           T& target) {
    const CLI::Option* opt = app->get_option_no_throw(flag);
    if (opt && opt->count() > 0) return;
    if (j.contains(key)) target = j.at(key).get<T>();
}

void add_common(CLI::App* app, CommonConfig& c, bool with_a = true) {
    if (with_a) app->add_option("--a", c.a, "domain length (nonlocal-window units)");
    app->add_option("--D", c.D, "diffusivity");
    app->add_option("--bc", c.bc, "boundary conditions: dirichlet | neumann");
    app->add_option("--N", c.n, "number of grid subintervals");
    app->add_option("--out", c.out, "output directory");
    app->add_option("--jobs", c.jobs, "worker cap for parallel sweeps");
    app->add_flag("--timings", c.timings, "include wall times in summaries (non-reproducible)");
}

void merge_common(const CLI::App* app, const json& j, CommonConfig& c) {
    merge(app, j, "--a", "a", c.a);
    merge(app, j, "--D", "D", c.D);
    merge(app, j, "--bc", "bc", c.bc);
    merge(app, j, "--N", "N", c.n);
    merge(app, j, "--out", "out", c.out);
    merge(app, j, "--jobs", "jobs", c.jobs);
    merge(app, j, "--timings", "timings", c.timings);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady states, bifurcation diagrams, stability, and dynamics of the 1D "
                 "nonlocal Fisher-KPP equation with a top-hat kernel on [0, a]"};
    app.require_subcommand(1);
    app.fallthrough(); // allow the global --config after a subcommand name
    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON config file; command-line flags override its values");

    SteadyConfig steady;
    ContinueConfig cont;
    EvolveConfig evolve;
    StabilityConfig stab;
    SweepConfig sweep;
    ValidateConfig validate;

    CLI::App* c_steady = app.add_subcommand("steady", "solve one steady state with Newton");
    add_common(c_steady, steady.common);
    c_steady->add_option("--guess", steady.guess, "closed-form | constant | file");
    c_steady->add_option("--guess-constant", steady.guess_constant, "value for --guess constant");
    c_steady->add_option("--guess-file", steady.guess_file, "profile CSV for --guess file");
    c_steady->add_option("--tol", steady.tol, "Newton residual tolerance");

    CLI::App* c_cont = app.add_subcommand(
        "continue", "trace a steady branch by pseudo-arclength continuation in a");
    add_common(c_cont, cont.common, /*with_a=*/false);
    c_cont->add_option("--a0", cont.a0, "seed domain length (a0 < 1/2 for closed-form seeds)");
    c_cont->add_option("--a-stop", cont.a_stop, "trace until a reaches this value");
    c_cont->add_option("--ds-init", cont.ds_init, "initial arclength step");
    c_cont->add_option("--ds-min", cont.ds_min, "minimum arclength step");
    c_cont->add_option("--ds-max", cont.ds_max, "maximum arclength step");
    c_cont->add_flag("--stability", cont.stability, "annotate sigma_max along the branch");
    c_cont->add_option("--stability-stride", cont.stability_stride,
                       "annotate every k-th point when --stability is set");
    c_cont->add_option("--profile-stride", cont.profile_stride,
                       "write profile snapshots every k-th point");
    c_cont->add_flag("--cusp-restarts", cont.cusp_restarts,
                     "restart above subcritical cusps (small D)");
    c_cont->add_option("--max-points", cont.max_points, "hard cap on branch points");
    c_cont->add_option("--seed", cont.seed, "closed-form | file");
    c_cont->add_option("--seed-file", cont.seed_file, "profile CSV for --seed file");

    CLI::App* c_evolve =
        app.add_subcommand("evolve", "integrate the initial-value problem in time");
    add_common(c_evolve, evolve.common);
    c_evolve->add_option("--t-end", evolve.t_end, "integration horizon");
    c_evolve->add_option("--snapshots", evolve.snapshot_times, "snapshot times")
        ->delimiter(',');
    c_evolve->add_option("--ic", evolve.ic, "bump | file | closed-form | constant");
    c_evolve->add_option("--x0", evolve.x0, "bump centre");
    c_evolve->add_option("--x0-list", evolve.x0_list, "bump centres for a parallel sweep")
        ->delimiter(',');
    c_evolve->add_option("--w", evolve.w, "bump width");
    c_evolve->add_option("--amp", evolve.amp, "bump amplitude");
    c_evolve->add_option("--ic-constant", evolve.ic_constant, "value for --ic constant");
    c_evolve->add_option("--ic-file", evolve.ic_file, "profile CSV for --ic file");
    double fixed_dt = 0.0;
    CLI::Option* fx = c_evolve->add_option(
        "--fixed-dt", fixed_dt, "bypass the step controller with a fixed dt (testing)");

    CLI::App* c_stab =
        app.add_subcommand("stability", "eigenvalues of the linearisation about a steady state");
    add_common(c_stab, stab.common);
    c_stab->add_option("--seed", stab.seed, "closed-form | constant | file");
    c_stab->add_option("--seed-constant", stab.seed_constant, "value for --seed constant");
    c_stab->add_option("--seed-file", stab.seed_file, "profile CSV for --seed file");
    c_stab->add_option("--k", stab.k, "how many leading eigenvalues to keep");
    c_stab->add_option("--mode", stab.mode, "dense | iterative");

    CLI::App* c_sweep = app.add_subcommand(
        "sweep-hysteresis", "quasi-static up-then-down sweep of a, tracking the attractor");
    add_common(c_sweep, sweep.common, /*with_a=*/false);
    c_sweep->add_option("--a-from", sweep.a_from, "lower end of the sweep");
    c_sweep->add_option("--a-to", sweep.a_to, "upper end of the sweep");
    c_sweep->add_option("--a-step", sweep.a_step, "sweep increment");
    c_sweep->add_option("--ic", sweep.ic, "first-point initial condition: bump | file");
    c_sweep->add_option("--x0", sweep.x0, "bump centre (default: domain midpoint)");
    c_sweep->add_option("--w", sweep.w, "bump width");
    c_sweep->add_option("--amp", sweep.amp, "bump amplitude");
    c_sweep->add_option("--ic-file", sweep.ic_file, "profile CSV for --ic file");
    c_sweep->add_option("--t-max", sweep.t_max, "per-point integration cap");

    CLI::App* c_validate =
        app.add_subcommand("validate", "run the oracle comparison suite and report pass/fail");
    add_common(c_validate, validate.common, /*with_a=*/false);
    c_validate->add_flag("--quick", validate.quick, "run the fast subset only");

    std::string out_for_errors = "out";
    try {
        app.parse(argc, argv);
        const json cfg = load_config(config_path);

        if (*c_steady) {
            merge_common(c_steady, cfg, steady.common);
            merge(c_steady, cfg, "--guess", "guess", steady.guess);
            merge(c_steady, cfg, "--guess-constant", "guess_constant", steady.guess_constant);
            merge(c_steady, cfg, "--guess-file", "guess_file", steady.guess_file);
            merge(c_steady, cfg, "--tol", "tol", steady.tol);
            out_for_errors = steady.common.out;
            return cmd_steady(steady);
        }
        if (*c_cont) {
            merge_common(c_cont, cfg, cont.common);
            merge(c_cont, cfg, "--a0", "a0", cont.a0);
            merge(c_cont, cfg, "--a-stop", "a_stop", cont.a_stop);
            merge(c_cont, cfg, "--ds-init", "ds_init", cont.ds_init);
            merge(c_cont, cfg, "--ds-min", "ds_min", cont.ds_min);
            merge(c_cont, cfg, "--ds-max", "ds_max", cont.ds_max);
            merge(c_cont, cfg, "--stability", "stability", cont.stability);
            merge(c_cont, cfg, "--stability-stride", "stability_stride", cont.stability_stride);
            merge(c_cont, cfg, "--profile-stride", "profile_stride", cont.profile_stride);
            merge(c_cont, cfg, "--cusp-restarts", "cusp_restarts", cont.cusp_restarts);
            merge(c_cont, cfg, "--max-points", "max_points", cont.max_points);
            merge(c_cont, cfg, "--seed", "seed", cont.seed);
            merge(c_cont, cfg, "--seed-file", "seed_file", cont.seed_file);
            out_for_errors = cont.common.out;
            return cmd_continue(cont);
        }
        if (*c_evolve) {
            merge_common(c_evolve, cfg, evolve.common);
            merge(c_evolve, cfg, "--t-end", "t_end", evolve.t_end);
            merge(c_evolve, cfg, "--snapshots", "snapshots", evolve.snapshot_times);
            merge(c_evolve, cfg, "--ic", "ic", evolve.ic);
            merge(c_evolve, cfg, "--x0", "x0", evolve.x0);
            merge(c_evolve, cfg, "--x0-list", "x0_list", evolve.x0_list);
            merge(c_evolve, cfg, "--w", "w", evolve.w);
            merge(c_evolve, cfg, "--amp", "amp", evolve.amp);
            merge(c_evolve, cfg, "--ic-constant", "ic_constant", evolve.ic_constant);
            merge(c_evolve, cfg, "--ic-file", "ic_file", evolve.ic_file);
            if (fx->count() > 0)
                evolve.fixed_dt = fixed_dt;
            else if (cfg.contains("fixed_dt"))
                evolve.fixed_dt = cfg.at("fixed_dt").get<double>();
            out_for_errors = evolve.common.out;
            return cmd_evolve(evolve);
        }
        if (*c_stab) {
            merge_common(c_stab, cfg, stab.common);
            merge(c_stab, cfg, "--seed", "seed", stab.seed);
            merge(c_stab, cfg, "--seed-constant", "seed_constant", stab.seed_constant);
            merge(c_stab, cfg, "--seed-file", "seed_file", stab.seed_file);
            merge(c_stab, cfg, "--k", "k", stab.k);
            merge(c_stab, cfg, "--mode", "mode", stab.mode);
            out_for_errors = stab.common.out;
            return cmd_stability(stab);
        }
        if (*c_sweep) {
            merge_common(c_sweep, cfg, sweep.common);
            merge(c_sweep, cfg, "--a-from", "a_from", sweep.a_from);
            merge(c_sweep, cfg, "--a-to", "a_to", sweep.a_to);
            merge(c_sweep, cfg, "--a-step", "a_step", sweep.a_step);
            merge(c_sweep, cfg, "--ic", "ic", sweep.ic);
            merge(c_sweep, cfg, "--x0", "x0", sweep.x0);
            merge(c_sweep, cfg, "--w", "w", sweep.w);
            merge(c_sweep, cfg, "--amp", "amp", sweep.amp);
            merge(c_sweep, cfg, "--ic-file", "ic_file", sweep.ic_file);
            merge(c_sweep, cfg, "--t-max", "t_max", sweep.t_max);
            out_for_errors = sweep.common.out;
            return cmd_sweep_hysteresis(sweep);
        }
        if (*c_validate) {
            merge_common(c_validate, cfg, validate.common);
            merge(c_validate, cfg, "--quick", "quick", validate.quick);
            out_for_errors = validate.common.out;
            return cmd_validate(validate);
        }
        return kExitConfig;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    } catch (const fkpp::BlowUpError& e) {
        report_error(out_for_errors, "blow-up", e.what());
        return kExitBlowUp;
    } catch (const std::invalid_argument& e) {
        report_error(out_for_errors, "config", e.what());
        return kExitConfig;
    } catch (const std::domain_error& e) {
        report_error(out_for_errors, "config", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        report_error(out_for_errors, "runtime", e.what());
        return 1;
    }
}
