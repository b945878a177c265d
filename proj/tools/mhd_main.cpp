#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mhd/runner.hpp"

namespace {

struct Cli {
    std::string config;
    std::string out;
    int threads = 0;
};

void apply_overrides(mhd::RunConfig& cfg, const Cli& cli, const std::string& mode) {
    cfg.experiment = mode;
    if (!cli.out.empty()) cfg.out_dir = cli.out;
    if (cli.threads > 0) cfg.threads = cli.threads;
}

void add_common(CLI::App* sub, Cli& cli) {
    sub->add_option("--config", cli.config, "JSON run manifest")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", cli.out, "output directory (overrides manifest)");
    sub->add_option("--threads", cli.threads, "solver threads (overrides manifest)");
}

int run_mode(const std::string& mode, const Cli& cli) {
    auto cfg = mhd::RunConfig::from_json_file(cli.config);
    apply_overrides(cfg, cli, mode);
    if (mode == "converge") {
        auto res = mhd::run_converge(cfg);
        for (std::size_t i = 0; i < res.levels.size(); ++i) {
            const auto& L = res.levels[i];
            std::printf("level h=%.6g dt=%.6g err_zp=%.6e err_zm=%.6e rate_zp=%.4f rate_zm=%.4f iters=%.2f\n",
                        L.h, L.dt, L.err_zp, L.err_zm, res.rate_zp[i], res.rate_zm[i], L.avg_iters);
        }
        std::printf("table: %s\n", res.table_csv.c_str());
    } else if (mode == "conserve") {
        auto res = mhd::run_conserve(cfg);
        std::printf("steps=%d E0=%.15e EN=%.15e DN=%.15e\n", res.steps, res.E0, res.EN, res.DN);
        std::printf("balance_defect_rel=%.3e energy_drift_rel=%.3e cross_helicity_drift_rel=%.3e\n",
                    res.balance_defect_rel, res.energy_drift_rel, res.cross_helicity_drift_rel);
        std::printf("steps_csv: %s\ndiag_csv: %s\n", res.steps_csv.c_str(), res.diag_csv.c_str());
    } else if (mode == "adapt") {
        auto res = mhd::run_adapt(cfg);
        std::printf("accepted=%d rejected=%d max_accepted_lte=%.3e t_end=%.6f\n",
                    res.accepted, res.rejected, res.max_accepted_lte, res.t_end);
        std::printf("ke_error_adaptive=%.6e ke_error_constant=%.6e\n",
                    res.ke_error_adaptive, res.ke_error_constant);
        std::printf("steps_csv: %s\ndiag_csv: %s\nconstant_steps_csv: %s\n",
                    res.steps_csv.c_str(), res.diag_csv.c_str(), res.constant_steps_csv.c_str());
    } else if (mode == "compare") {
        auto res = mhd::run_compare(cfg);
        for (std::size_t i = 0; i < res.pim.levels.size(); ++i)
            std::printf("pim     h=%.6g err_zp=%.6e rate_zp=%.4f\n",
                        res.pim.levels[i].h, res.pim.levels[i].err_zp, res.pim.rate_zp[i]);
        for (std::size_t i = 0; i < res.bdf2.levels.size(); ++i)
            std::printf("bdf2ab2 h=%.6g err_zp=%.6e rate_zp=%.4f\n",
                        res.bdf2.levels[i].h, res.bdf2.levels[i].err_zp, res.bdf2.rate_zp[i]);
        std::printf("table: %s\n", res.merged_csv.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"incompressible MHD solver driver"};
    app.require_subcommand(1);

    Cli cli;
    const char* modes[] = {"converge", "conserve", "adapt", "compare"};
    const char* blurbs[] = {
        "mesh refinement study with error tables",
        "energy and cross-helicity budget run",
        "adaptive step-size run with matched constant-step control",
        "midpoint scheme versus the two-step baseline",
    };
    for (int i = 0; i < 4; ++i) add_common(app.add_subcommand(modes[i], blurbs[i]), cli);

    CLI11_PARSE(app, argc, argv);

    const std::string mode = app.get_subcommands().front()->get_name();
    try {
        return run_mode(mode, cli);
    } catch (const std::exception& e) {
        nlohmann::json j{{"mode", mode}, {"config", cli.config}, {"what", e.what()}};
        std::fprintf(stderr, "error: %s\n", j.dump().c_str());
        return 1;
    }
}
