#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fkpp/fkpp.hpp"

namespace fkpp::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBlowUp = 3;
inline constexpr int kExitValidation = 4;

struct CommonConfig {
    double a = 1.0;
    double D = 0.01;
    std::string bc = "dirichlet";
    int n = 1000;
    std::string out = "out";
    int jobs = 1;
    bool timings = false; // include wall times in summaries (off: outputs are bit-reproducible)
};

Params to_params(const CommonConfig& c);

struct SteadyConfig {
    CommonConfig common;
    std::string guess = "closed-form"; // closed-form | constant | file
    double guess_constant = 1.0;
    std::string guess_file;
    double tol = 1e-10;
};

struct ContinueConfig {
    CommonConfig common;
    double a0 = 0.45; // seed domain length
    double a_stop = 3.0;
    double ds_init = 1e-3, ds_min = 1e-6, ds_max = 5e-3;
    bool stability = false;
    int stability_stride = 100;
    int profile_stride = 50;
    bool cusp_restarts = false;
    int max_points = 200000;
    std::string seed = "closed-form"; // closed-form | file
    std::string seed_file;
};

struct EvolveConfig {
    CommonConfig common;
    double t_end = 10.0;
    std::vector<double> snapshot_times;
    std::string ic = "bump"; // bump | file | closed-form | constant
    double x0 = 0.0, w = 0.1, amp = 0.01;
    std::vector<double> x0_list; // optional sweep, parallelised over jobs
    double ic_constant = 1.0;
    std::string ic_file;
    std::optional<double> fixed_dt; // testing hook: bypasses the step controller
};

struct StabilityConfig {
    CommonConfig common;
    std::string seed = "closed-form"; // closed-form | constant | file
    double seed_constant = 1.0;
    std::string seed_file;
    int k = 6;
    std::string mode = "dense"; // dense | iterative
};

struct SweepConfig {
    CommonConfig common;
    double a_from = 2.0, a_to = 2.6, a_step = 0.2;
    std::string ic = "bump"; // first-point initial condition
    double x0 = -1.0, w = 0.1, amp = 0.01; // x0 < 0 means domain midpoint
    std::string ic_file;
    double t_max = 500.0;
    double quasi_steady_tol = 1e-5; // evolve to here, then Newton-polish
};

struct ValidateConfig {
    CommonConfig common;
    bool quick = false;
};

int cmd_steady(const SteadyConfig& cfg);
int cmd_continue(const ContinueConfig& cfg);
int cmd_evolve(const EvolveConfig& cfg);
int cmd_stability(const StabilityConfig& cfg);
int cmd_sweep_hysteresis(const SweepConfig& cfg);
int cmd_validate(const ValidateConfig& cfg);

/// Writes error.json under dir (best effort) and mirrors the message to stderr.
void report_error(const std::filesystem::path& dir, const std::string& kind,
                  const std::string& message);

} // namespace fkpp::cli
