#include "mhd/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mhd {

namespace {

using json = nlohmann::json;

std::string sanitize_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    std::string s(buf);
    for (auto& c : s) {
        if (c == '.') c = 'p';
        if (c == '-') c = 'm';
    }
    return s;
}

std::ofstream open_csv(const std::string& dir, const std::string& name, std::string& path_out) {
    std::filesystem::create_directories(dir);
    path_out = (std::filesystem::path(dir) / name).string();
    std::ofstream os(path_out, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open output file " + path_out);
    return os;
}

double geo_mean(const std::vector<double>& v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double x : v) {
        if (x <= 0.0) return std::numeric_limits<double>::quiet_NaN();
        s += std::log(x);
    }
    return std::exp(s / static_cast<double>(v.size()));
}

const char* STEPS_HEADER =
    "scheme,step,t,tau,iters,rel_change,contraction_geo,tau_bound,within_bound,lte,R,"
    "accepted,energy,dissipation_cum\n";
const char* DIAG_HEADER =
    "t,E_elsasser,E_primitive,cross_helicity,dissipation_cum,magnetic_helicity,"
    "err_zp_L2,err_zm_L2\n";

void write_steps_row(std::ofstream& os, const std::string& scheme, long step, double t,
                     double tau, int iters, double rel_change, double contraction_geo,
                     double tau_bound, int within, double lte, double R, int accepted,
                     double energy, double diss_cum) {
    os << scheme << ',' << step << ',' << csv_num(t) << ',' << csv_num(tau) << ',' << iters
       << ',' << csv_num(rel_change) << ',' << csv_num(contraction_geo) << ','
       << csv_num(tau_bound) << ',' << within << ',' << csv_num(lte) << ',' << csv_num(R)
       << ',' << accepted << ',' << csv_num(energy) << ',' << csv_num(diss_cum) << '\n';
}

void write_diag_row(std::ofstream& os, const DiagnosticRecord& r) {
    os << csv_num(r.t) << ',' << csv_num(r.energy_elsasser) << ','
       << csv_num(r.energy_primitive) << ',' << csv_num(r.cross_helicity) << ','
       << csv_num(r.dissipation_cum) << ',' << csv_num(r.magnetic_helicity) << ','
       << csv_num(r.err_zp_l2) << ',' << csv_num(r.err_zm_l2) << '\n';
}

struct MarchOutcome {
    double err_zp_inf = 0.0, err_zm_inf = 0.0;
    double avg_iters = 0.0;
    double E0 = 0.0, EN = 0.0, D_cum = 0.0;
    double hc0 = 0.0;
    double energy_drift_rel = 0.0;
    double hc_drift_rel = 0.0;
    int steps = 0;
    ElsasserState final_state;
};

/// Constant-step march of either scheme with optional CSV logging and
/// error/diagnostic tracking.
MarchOutcome march_constant(const SpacePair& space, const ProblemSpec& prob,
                            const RunConfig& cfg, const std::string& scheme, double t0,
                            double dt, int n_steps, std::ofstream* steps_os,
                            std::ofstream* diag_os) {
    const bool track_errors = prob.manufactured();
    PimOptions opt{cfg.picard_tol, cfg.maxit, cfg.linear_tol, cfg.threads > 1};

    MarchOutcome out;
    double iter_sum = 0.0;
    int solve_steps = 0;

    auto diag_record = [&](const FemOperators& ops, const ElsasserState& s,
                           double diss_cum) -> DiagnosticRecord {
        DiagnosticRecord r;
        r.t = s.t;
        r.energy_elsasser = energy_elsasser(s.zp.coeffs, s.zm.coeffs, ops.M);
        r.energy_primitive =
            energy_primitive(s.zp.coeffs, s.zm.coeffs, ops.M, ops.comp_int, prob.b0, ops.area);
        r.cross_helicity = cross_helicity(s.zp.coeffs, s.zm.coeffs, ops.M, ops.comp_int, prob.b0);
        r.dissipation_cum = diss_cum;
        if (track_errors) {
            r.err_zp_l2 =
                error_norms(space, s.zp.coeffs, prob.exact_zp, s.t, QuadRule::triangle(5), true).l2;
            r.err_zm_l2 =
                error_norms(space, s.zm.coeffs, prob.exact_zm, s.t, QuadRule::triangle(5), true).l2;
        }
        return r;
    };

    auto absorb = [&](const DiagnosticRecord& r, bool first) {
        if (first) {
            out.E0 = r.energy_elsasser;
            out.hc0 = r.cross_helicity;
        }
        out.EN = r.energy_elsasser;
        if (track_errors) {
            out.err_zp_inf = std::max(out.err_zp_inf, r.err_zp_l2);
            out.err_zm_inf = std::max(out.err_zm_inf, r.err_zm_l2);
        }
        const double e_scale = std::max(std::abs(out.E0), 1e-30);
        const double hc_scale = std::max(std::abs(out.hc0), 1e-30);
        out.energy_drift_rel =
            std::max(out.energy_drift_rel, std::abs(r.energy_elsasser - out.E0) / e_scale);
        out.hc_drift_rel =
            std::max(out.hc_drift_rel, std::abs(r.cross_helicity - out.hc0) / hc_scale);
        if (diag_os) write_diag_row(*diag_os, r);
    };

    if (scheme == "pim") {
        PimStepper stepper(space, prob, opt);
        ElsasserState state = stepper.initial_state(t0);
        absorb(diag_record(stepper.ops(), state, 0.0), true);
        for (int k = 0; k < n_steps; ++k) {
            auto [next, rep] = stepper.step(state, dt);
            state = std::move(next);
            out.D_cum += rep.dissipation_increment;
            iter_sum += rep.iter.iterations;
            ++solve_steps;
            if (steps_os)
                write_steps_row(*steps_os, scheme, state.step_index, state.t, dt,
                                rep.iter.iterations,
                                rep.iter.rel_changes.empty() ? 0.0 : rep.iter.rel_changes.back(),
                                geo_mean(rep.iter.contraction_ratios), rep.iter.tau_bound,
                                rep.iter.tau_within_bound ? 1 : 0,
                                std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN(), 1, rep.energy,
                                out.D_cum);
            absorb(diag_record(stepper.ops(), state, out.D_cum), false);
        }
        out.final_state = std::move(state);
    } else if (scheme == "bdf2ab2") {
        if (n_steps < 1) throw std::invalid_argument("march: bdf2ab2 needs at least one step");
        Bdf2Stepper stepper(space, prob, opt);
        ElsasserState state = stepper.initial_state(t0, dt);
        {
            ElsasserState level0;
            level0.zp = state.zp_prev;
            level0.zm = state.zm_prev;
            level0.t = t0;
            absorb(diag_record(stepper.ops(), level0, 0.0), true);
        }
        absorb(diag_record(stepper.ops(), state, 0.0), false);
        for (int k = 1; k < n_steps; ++k) {
            auto [next, rep] = stepper.step(state, dt);
            state = std::move(next);
            iter_sum += rep.iter.iterations;
            ++solve_steps;
            if (steps_os)
                write_steps_row(*steps_os, scheme, state.step_index, state.t, dt,
                                rep.iter.iterations, std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN(), 0,
                                std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN(), 1, rep.energy, 0.0);
            absorb(diag_record(stepper.ops(), state, 0.0), false);
        }
        out.final_state = std::move(state);
    } else {
        throw std::invalid_argument("march: unknown scheme " + scheme);
    }

    out.steps = solve_steps;
    out.avg_iters = solve_steps > 0 ? iter_sum / solve_steps : 0.0;
    return out;
}

/// Primitive energy of the exact fields by direct quadrature.
double exact_primitive_energy(const SpacePair& space, const ProblemSpec& prob, double t) {
    VectorField u_ex = [&](const Vec2& x, double tt) -> Vec2 {
        return 0.5 * (prob.exact_zp(x, tt) + prob.exact_zm(x, tt));
    };
    VectorField B_ex = [&](const Vec2& x, double tt) -> Vec2 {
        return prob.b0 + 0.5 * (prob.exact_zp(x, tt) - prob.exact_zm(x, tt));
    };
    return 0.5 * (integrate_squared(space, u_ex, t) + integrate_squared(space, B_ex, t));
}

} // namespace

std::string csv_num(double v) {
    if (!std::isfinite(v)) return "na";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    json j = json::parse(is);

    RunConfig cfg;
    cfg.experiment = j.value("experiment", cfg.experiment);
    cfg.problem = j.value("problem", cfg.problem);
    cfg.scheme = j.value("scheme", cfg.scheme);
    if (j.contains("levels")) cfg.levels = j.at("levels").get<std::vector<int>>();
    cfg.t0 = j.value("t0", cfg.t0);
    cfg.T = j.value("T", cfg.T);
    cfg.dt = j.value("dt", cfg.dt);
    cfg.nu = j.value("nu", cfg.nu);
    cfg.nu_m = j.value("nu_m", cfg.nu_m);
    cfg.ideal = j.value("ideal", cfg.ideal);
    if (j.contains("B0")) {
        auto b = j.at("B0").get<std::vector<double>>();
        if (b.size() != 2) throw std::invalid_argument("config: B0 must have two components");
        cfg.b0 = Vec2(b[0], b[1]);
    }
    if (j.contains("hartmann")) {
        const auto& h = j.at("hartmann");
        cfg.hartmann.L = h.value("L", cfg.hartmann.L);
        cfg.hartmann.G = h.value("G", cfg.hartmann.G);
        cfg.hartmann.S = h.value("S", cfg.hartmann.S);
        cfg.hartmann.Ha = h.value("Ha", cfg.hartmann.Ha);
        cfg.hartmann.M = h.value("M", cfg.hartmann.M);
    }
    cfg.omega = j.value("omega", cfg.omega);
    cfg.nx = j.value("nx", cfg.nx);
    cfg.ny = j.value("ny", cfg.ny);
    cfg.picard_tol = j.value("tol", cfg.picard_tol);
    cfg.maxit = j.value("maxit", cfg.maxit);
    cfg.linear_tol = j.value("linear_tol", cfg.linear_tol);
    if (j.contains("adapt")) {
        const auto& a = j.at("adapt");
        cfg.ctrl.tol = a.value("lte_tol", cfg.ctrl.tol);
        cfg.ctrl.kappa = a.value("kappa", cfg.ctrl.kappa);
        cfg.ctrl.tau_min = a.value("tau_min", cfg.ctrl.tau_min);
        cfg.ctrl.tau_max = a.value("tau_max", cfg.ctrl.tau_max);
        cfg.ctrl.max_rejects = a.value("max_rejects", cfg.ctrl.max_rejects);
    }
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.run_id = j.value("run_id", cfg.run_id);
    return cfg;
}

ProblemSpec RunConfig::make_problem() const {
    if (problem == "wave") return travelling_wave(physical(), b0);
    if (problem == "hartmann") return hartmann_channel(hartmann, physical());
    if (problem == "lindberg") return lindberg_hartmann(hartmann, physical(), omega);
    if (problem == "decay") return decay_problem(physical(), b0);
    throw std::invalid_argument("unknown problem " + problem);
}

std::pair<int, int> RunConfig::level_mesh(int n) const {
    if (n <= 0) throw std::invalid_argument("level_mesh: level must be positive");
    // An n x n grid everywhere: duct profiles vary only in y, so the long
    // channel direction may stay coarse without touching the observed rates.
    return {n, n};
}

std::string RunConfig::tag() const {
    const ProblemSpec spec = make_problem();
    return problem + "_" + scheme + "_B" + sanitize_number(spec.b0.x()) + "_" +
           sanitize_number(spec.b0.y());
}

ConvergeResult run_converge(const RunConfig& cfg) {
    const ProblemSpec prob = cfg.make_problem();
    if (!prob.manufactured())
        throw std::invalid_argument("run_converge: needs a manufactured problem");
    if (cfg.levels.empty()) throw std::invalid_argument("run_converge: empty level list");

    ConvergeResult result;
    std::vector<double> hs, errs_p, errs_m;
    for (int n : cfg.levels) {
        const auto [mx, my] = cfg.level_mesh(n);
        const Mesh mesh = build_rect_mesh(prob.box[0], prob.box[1], prob.box[2], prob.box[3],
                                          mx, my);
        const SpacePair space = build_spaces(mesh);
        const double h = 1.0 / n;
        const double dt = cfg.dt > 0.0 ? cfg.dt : h;
        const int n_steps = std::max(1, static_cast<int>(std::llround((cfg.T - cfg.t0) / dt)));
        const double dt_eff = (cfg.T - cfg.t0) / n_steps;

        std::string steps_path;
        auto steps_os = open_csv(cfg.out_dir, "steps_" + cfg.tag() + "_h" + std::to_string(n) +
                                                  ".csv",
                                 steps_path);
        steps_os << STEPS_HEADER;

        const auto tic = std::chrono::steady_clock::now();
        MarchOutcome mo = march_constant(space, prob, cfg, cfg.scheme, cfg.t0, dt_eff, n_steps,
                                         &steps_os, nullptr);
        const auto toc = std::chrono::steady_clock::now();

        LevelResult lr;
        lr.h = h;
        lr.dt = dt_eff;
        lr.err_zp = mo.err_zp_inf;
        lr.err_zm = mo.err_zm_inf;
        lr.avg_iters = mo.avg_iters;
        lr.runtime_sec = std::chrono::duration<double>(toc - tic).count();
        result.levels.push_back(lr);
        hs.push_back(h);
        errs_p.push_back(lr.err_zp);
        errs_m.push_back(lr.err_zm);
    }
    result.rate_zp = convergence_rates(errs_p, hs);
    result.rate_zm = convergence_rates(errs_m, hs);

    auto os = open_csv(cfg.out_dir, "table_" + cfg.tag() + ".csv", result.table_csv);
    os << "h,dt,err_zp,rate_zp,err_zm,rate_zm,avg_iters\n";
    for (size_t i = 0; i < result.levels.size(); ++i) {
        const auto& lr = result.levels[i];
        os << csv_num(lr.h) << ',' << csv_num(lr.dt) << ',' << csv_num(lr.err_zp) << ','
           << csv_num(result.rate_zp[i]) << ',' << csv_num(lr.err_zm) << ','
           << csv_num(result.rate_zm[i]) << ',' << csv_num(lr.avg_iters) << '\n';
    }
    return result;
}

ConserveResult run_conserve(const RunConfig& cfg) {
    const ProblemSpec prob = cfg.make_problem();
    int mx = cfg.nx, my = cfg.ny;
    if (mx <= 0 || my <= 0) {
        if (cfg.levels.empty())
            throw std::invalid_argument("run_conserve: needs nx/ny or a level");
        std::tie(mx, my) = cfg.level_mesh(cfg.levels.front());
    }
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("run_conserve: needs dt > 0");

    const Mesh mesh = build_rect_mesh(prob.box[0], prob.box[1], prob.box[2], prob.box[3], mx, my);
    const SpacePair space = build_spaces(mesh);
    const int n_steps = std::max(1, static_cast<int>(std::llround((cfg.T - cfg.t0) / cfg.dt)));
    const double dt_eff = (cfg.T - cfg.t0) / n_steps;

    const std::string run = cfg.run_id.empty() ? cfg.tag() + "_conserve" : cfg.run_id;
    ConserveResult result;
    auto steps_os = open_csv(cfg.out_dir, "steps_" + run + ".csv", result.steps_csv);
    steps_os << STEPS_HEADER;
    auto diag_os = open_csv(cfg.out_dir, "diag_" + run + ".csv", result.diag_csv);
    diag_os << DIAG_HEADER;

    MarchOutcome mo = march_constant(space, prob, cfg, cfg.scheme, cfg.t0, dt_eff, n_steps,
                                     &steps_os, &diag_os);
    result.E0 = mo.E0;
    result.EN = mo.EN;
    result.DN = mo.D_cum;
    result.balance_defect_rel =
        std::abs(mo.EN + mo.D_cum - mo.E0) / std::max(std::abs(mo.E0), 1e-30);
    result.energy_drift_rel = mo.energy_drift_rel;
    result.cross_helicity_drift_rel = mo.hc_drift_rel;
    result.hc0 = mo.hc0;
    result.steps = mo.steps;
    return result;
}

AdaptResult run_adapt(const RunConfig& cfg) {
    const ProblemSpec prob = cfg.make_problem();
    int mx = cfg.nx, my = cfg.ny;
    if (mx <= 0 || my <= 0) {
        if (cfg.levels.empty()) throw std::invalid_argument("run_adapt: needs nx/ny or a level");
        std::tie(mx, my) = cfg.level_mesh(cfg.levels.front());
    }
    const Mesh mesh = build_rect_mesh(prob.box[0], prob.box[1], prob.box[2], prob.box[3], mx, my);
    const SpacePair space = build_spaces(mesh);

    PimOptions opt{cfg.picard_tol, cfg.maxit, cfg.linear_tol, cfg.threads > 1};
    PimStepper stepper(space, prob, opt);

    AdaptiveResult ar = adaptive_loop(stepper, cfg.t0, cfg.T, cfg.ctrl);

    const std::string run = cfg.run_id.empty() ? cfg.tag() + "_adapt" : cfg.run_id;
    AdaptResult result;
    result.records = ar.records;
    result.accepted = ar.accepted;
    result.rejected = ar.rejected;
    result.t_end = ar.state.t;

    auto steps_os = open_csv(cfg.out_dir, "steps_" + run + ".csv", result.steps_csv);
    steps_os << STEPS_HEADER;
    for (const auto& r : ar.records) {
        if (r.accepted && std::isfinite(r.lte))
            result.max_accepted_lte = std::max(result.max_accepted_lte, r.lte);
        write_steps_row(steps_os, "pim", r.step, r.t, r.tau, r.iterations,
                        std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN(), 0, r.lte, r.R,
                        r.accepted ? 1 : 0, r.energy, r.dissipation_cum);
    }

    auto diag_os = open_csv(cfg.out_dir, "diag_" + run + ".csv", result.diag_csv);
    diag_os << DIAG_HEADER;
    {
        DiagnosticRecord r;
        r.t = ar.state.t;
        r.energy_elsasser = energy_elsasser(ar.state.zp.coeffs, ar.state.zm.coeffs,
                                            stepper.ops().M);
        r.energy_primitive = energy_primitive(ar.state.zp.coeffs, ar.state.zm.coeffs,
                                              stepper.ops().M, stepper.ops().comp_int, prob.b0,
                                              stepper.ops().area);
        r.cross_helicity = cross_helicity(ar.state.zp.coeffs, ar.state.zm.coeffs,
                                          stepper.ops().M, stepper.ops().comp_int, prob.b0);
        r.dissipation_cum = ar.dissipation_cum;
        if (prob.manufactured()) {
            r.err_zp_l2 = error_norms(space, ar.state.zp.coeffs, prob.exact_zp, ar.state.t,
                                      QuadRule::triangle(5), true)
                              .l2;
            r.err_zm_l2 = error_norms(space, ar.state.zm.coeffs, prob.exact_zm, ar.state.t,
                                      QuadRule::triangle(5), true)
                              .l2;
        }
        write_diag_row(diag_os, r);
    }

    if (prob.manufactured()) {
        const double e_exact = exact_primitive_energy(space, prob, ar.state.t);
        const double e_adapt =
            energy_primitive(ar.state.zp.coeffs, ar.state.zm.coeffs, stepper.ops().M,
                             stepper.ops().comp_int, prob.b0, stepper.ops().area);
        result.ke_error_adaptive = std::abs(e_adapt - e_exact);

        // Constant-step control run with the same number of accepted steps.
        if (ar.accepted <= 0) throw AdaptivityFailure("run_adapt: no accepted steps");
        const double dt_const = (cfg.T - cfg.t0) / ar.accepted;
        std::string cpath;
        auto const_os = open_csv(cfg.out_dir, "steps_" + run + "_constant.csv", cpath);
        const_os << STEPS_HEADER;
        result.constant_steps_csv = cpath;
        MarchOutcome mo = march_constant(space, prob, cfg, "pim", cfg.t0, dt_const, ar.accepted,
                                         &const_os, nullptr);
        const double e_const =
            energy_primitive(mo.final_state.zp.coeffs, mo.final_state.zm.coeffs,
                             stepper.ops().M, stepper.ops().comp_int, prob.b0,
                             stepper.ops().area);
        const double e_exact_const = exact_primitive_energy(space, prob, mo.final_state.t);
        result.ke_error_constant = std::abs(e_const - e_exact_const);
    }
    return result;
}

CompareResult run_compare(const RunConfig& cfg) {
    CompareResult result;
    RunConfig a = cfg;
    a.scheme = "pim";
    result.pim = run_converge(a);
    RunConfig b = cfg;
    b.scheme = "bdf2ab2";
    result.bdf2 = run_converge(b);

    RunConfig tagger = cfg;
    tagger.scheme = "both";
    auto os = open_csv(cfg.out_dir, "compare_" + tagger.tag() + ".csv", result.merged_csv);
    os << "scheme,h,dt,err_zp,rate_zp,err_zm,rate_zm,avg_iters\n";
    auto emit = [&](const char* name, const ConvergeResult& r) {
        for (size_t i = 0; i < r.levels.size(); ++i) {
            const auto& lr = r.levels[i];
            os << name << ',' << csv_num(lr.h) << ',' << csv_num(lr.dt) << ','
               << csv_num(lr.err_zp) << ',' << csv_num(r.rate_zp[i]) << ','
               << csv_num(lr.err_zm) << ',' << csv_num(r.rate_zm[i]) << ','
               << csv_num(lr.avg_iters) << '\n';
        }
    };
    emit("pim", result.pim);
    emit("bdf2ab2", result.bdf2);
    return result;
}

} // namespace mhd
