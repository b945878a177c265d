#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mhd/adapt.hpp"
#include "mhd/baseline.hpp"
#include "mhd/diagnostics.hpp"

namespace mhd {

/// Parsed experiment manifest.  JSON keys mirror the field names; command
/// line flags may override out_dir and threads.
struct RunConfig {
    std::string experiment = "converge"; ///< converge | conserve | adapt | compare
    std::string problem = "wave";        ///< wave | hartmann | lindberg | decay
    std::string scheme = "pim";          ///< pim | bdf2ab2
    std::vector<int> levels{16, 32, 64};
    double t0 = 0.0;
    double T = 1.0;
    double dt = 0.0; ///< 0 selects dt = h per level
    double nu = 2.5e-4;
    double nu_m = 2.5e-4;
    bool ideal = false;
    Vec2 b0 = Vec2::Zero();
    HartmannParams hartmann;
    double omega = 3.1;
    int nx = 0, ny = 0; ///< explicit mesh for conserve/adapt runs
    double picard_tol = 1e-6;
    int maxit = 50;
    double linear_tol = 1e-10;
    ControllerConfig ctrl{1e-4, 0.95, 1e-6, 1e-4, 30};
    std::string out_dir = "out";
    int threads = 1;
    std::string run_id;

    static RunConfig from_json_file(const std::string& path);

    PhysicalParams physical() const { return PhysicalParams(nu, nu_m, ideal); }
    ProblemSpec make_problem() const;
    /// Mesh cell counts for a convergence level (h = 1/n in the wall-normal
    /// or isotropic direction).
    std::pair<int, int> level_mesh(int n) const;
    std::string tag() const; ///< problem_scheme_B0 token used in file names
};

struct LevelResult {
    double h = 0.0;
    double dt = 0.0;
    double err_zp = 0.0; ///< max over step times of the spatial L2 error
    double err_zm = 0.0;
    double avg_iters = 0.0;
    double runtime_sec = 0.0;
};

struct ConvergeResult {
    std::vector<LevelResult> levels;
    std::vector<double> rate_zp;
    std::vector<double> rate_zm;
    std::string table_csv;
};

ConvergeResult run_converge(const RunConfig& cfg);

struct ConserveResult {
    double E0 = 0.0, EN = 0.0, DN = 0.0;
    double balance_defect_rel = 0.0;  ///< |E_N + D_N - E_0| / E_0
    double energy_drift_rel = 0.0;    ///< max_n |E_n - E_0| / E_0
    double cross_helicity_drift_rel = 0.0;
    double hc0 = 0.0;
    int steps = 0;
    std::string steps_csv, diag_csv;
};

ConserveResult run_conserve(const RunConfig& cfg);

struct AdaptResult {
    std::vector<AdaptStepRecord> records;
    int accepted = 0, rejected = 0;
    double max_accepted_lte = 0.0;
    double ke_error_adaptive = 0.0; ///< final-time primitive-energy error
    double ke_error_constant = 0.0; ///< matched-step constant-run error
    double t_end = 0.0;
    std::string steps_csv, diag_csv, constant_steps_csv;
};

AdaptResult run_adapt(const RunConfig& cfg);

struct CompareResult {
    ConvergeResult pim;
    ConvergeResult bdf2;
    std::string merged_csv;
};

CompareResult run_compare(const RunConfig& cfg);

/// Fixed-format scientific float used by every CSV writer (byte-stable
/// across reruns); non-finite values map to "na".
std::string csv_num(double v);

} // namespace mhd
