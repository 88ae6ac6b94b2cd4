#include "monolab/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "monolab/csvio.hpp"
#include "monolab/fbsolver.hpp"
#include "monolab/svg.hpp"

namespace monolab {

namespace {

namespace fs = std::filesystem;

Pair pair_from_config(const ExperimentConfig& cfg, std::shared_ptr<const BallGrid> grid) {
    if (cfg.pair == "plane")
        return make_plane_pair(grid, Vec{cfg.dir_x, cfg.dir_y, cfg.dir_z});
    if (cfg.pair == "sector") return make_sector_pair(grid, cfg.theta);
    if (cfg.pair == "inhomogeneous") return make_inhomogeneous_pair(grid, cfg.a);
    return make_zero_pair(grid);
}

std::vector<double> scan_radii(const ExperimentConfig& cfg, const BallGrid& g) {
    double lo = cfg.r_min.value_or(0.1 * g.R);
    double hi = cfg.r_max.value_or(g.R);
    std::vector<double> out;
    for (int i = 0; i < cfg.r_count; ++i)
        out.push_back(lo + (hi - lo) * i / std::max(1, cfg.r_count - 1));
    return out;
}

void do_scan(const ExperimentConfig& cfg, const ModelMetric& model,
             std::shared_ptr<const BallGrid> grid, const fs::path& out, Report& rep) {
    Pair pair = pair_from_config(cfg, grid);
    MonotonicityTrace tr = phi_scan(model, pair, scan_radii(cfg, *grid), cfg.c0);

    fs::path csv = out / "trace.csv";
    emit_csv(tr, csv.string());
    rep.files.push_back(csv.string());
    if (cfg.svg) {
        SvgSeries s1{"phi", tr.radii, tr.phi}, s2{"phi_F", tr.radii, tr.phi_F};
        fs::path svg = out / "phi.svg";
        emit_svg({s1, s2}, "phi(r), phi_F(r)", svg.string(), true);
        rep.files.push_back(svg.string());
    }

    VerdictRow v;
    v.name = "phi nondecreasing (running max)";
    v.op = "phi_scan";
    v.tolerance = tr.tol_mono;
    v.value = tr.phi.empty() ? 0.0 : tr.phi.back();
    if (tr.verdict_applicable) {
        v.pass = tr.verdict;
    } else {
        v.pass = true;
        v.note = "verdict not applicable (pair class is not subharmonic)";
    }
    rep.verdicts.push_back(v);

    PairValidation pv = validate_pair(model, pair, 5.0 * grid->h() * grid->h() + 1e-9);
    rep.constants.emplace_back("measured_min_laplacian_plus", pv.measured_min_lap_plus);
    rep.constants.emplace_back("measured_min_laplacian_minus", pv.measured_min_lap_minus);
}

void do_bound(const ExperimentConfig& cfg, const ModelMetric& model,
              std::shared_ptr<const BallGrid> grid, const fs::path& out, Report& rep) {
    Pair pair = pair_from_config(cfg, grid);
    double delta = cfg.delta.value_or(grid->R);
    AlmostMonoReport am = almost_mono_bound(model, pair, delta);
    rep.constants.emplace_back("sup_phi", am.sup_phi);
    rep.constants.emplace_back("budget", am.budget);
    rep.constants.emplace_back("C_fitted", am.C_fitted);

    VerdictRow v;
    v.name = "C_fitted finite";
    v.op = "almost_mono_bound";
    v.value = am.C_fitted;
    v.pass = std::isfinite(am.C_fitted);
    rep.verdicts.push_back(v);

    MonotonicityTrace tr = phi_scan(model, pair, scan_radii(cfg, *grid), 0.0);
    fs::path csv = out / "trace.csv";
    emit_csv(tr, csv.string());
    rep.files.push_back(csv.string());
}

void do_dyadic(const ExperimentConfig& cfg, const ModelMetric& model,
               std::shared_ptr<const BallGrid> grid, const fs::path& out, Report& rep) {
    Pair pair = pair_from_config(cfg, grid);
    DyadicTrace tr = dyadic_trace(model, pair, cfg.k_max, cfg.C2);
    fs::path csv = out / "dyadic.csv";
    emit_csv(tr, csv.string());
    rep.files.push_back(csv.string());
    if (cfg.svg) {
        std::vector<double> kk(tr.k.begin(), tr.k.end());
        SvgSeries s1{"b_plus", kk, tr.b_plus}, s2{"b_minus", kk, tr.b_minus};
        fs::path svg = out / "dyadic.svg";
        emit_svg({s1, s2}, "dyadic energies", svg.string(), false);
        rep.files.push_back(svg.string());
    }
    VerdictRow v1;
    v1.name = "dyadic product inequality";
    v1.op = "dyadic_trace";
    v1.pass = tr.product_verdict;
    rep.verdicts.push_back(v1);
    VerdictRow v2;
    v2.name = "decay dichotomy";
    v2.op = "dyadic_trace";
    v2.value = tr.fitted_eps;
    v2.pass = tr.dichotomy_verdict;
    v2.note = tr.dichotomy_triggers == 0 ? "vacuous (threshold never reached)" : "";
    rep.verdicts.push_back(v2);
    rep.constants.emplace_back("fitted_eps", tr.fitted_eps);
}

void do_fh(const ExperimentConfig& cfg, const fs::path& out, Report& rep) {
    FHReport one = friedland_hayman_check(cfg.n, cfg.fh_theta);
    VerdictRow v;
    v.name = "alpha_+ + alpha_- >= 2";
    v.op = "friedland_hayman_check";
    v.value = one.sum;
    v.tolerance = 1e-9;
    v.pass = one.pass;
    rep.verdicts.push_back(v);
    rep.constants.emplace_back("alpha_plus", one.alpha_plus);
    rep.constants.emplace_back("alpha_minus", one.alpha_minus);
    rep.constants.emplace_back("sum", one.sum);

    if (cfg.fh_count > 0) {
        auto openings = fh_scan_openings(cfg.n, cfg.fh_count);
        fs::path csv = out / "fh.csv";
        std::ofstream os(csv.string(), std::ios::binary);
        os << "theta,alpha_plus,alpha_minus,sum,pass\n";
        double min_sum = HUGE_VAL;
        bool all = true;
        for (double th : openings) {
            FHReport r = friedland_hayman_check(cfg.n, th);
            os << format_double(th) << ',' << format_double(r.alpha_plus) << ','
               << format_double(r.alpha_minus) << ',' << format_double(r.sum) << ','
               << (r.pass ? 1 : 0) << '\n';
            min_sum = std::min(min_sum, r.sum);
            all = all && r.pass;
        }
        rep.files.push_back(csv.string());
        VerdictRow vs;
        vs.name = "scan: min sum >= 2";
        vs.op = "friedland_hayman_check";
        vs.value = min_sum;
        vs.tolerance = 1e-9;
        vs.pass = all;
        rep.verdicts.push_back(vs);
        rep.constants.emplace_back("scan_min_sum", min_sum);
    }
}

void do_solve(const ExperimentConfig& cfg, const ModelMetric& model,
              std::shared_ptr<const BallGrid> grid, const fs::path& out, Report& rep) {
    TwoPhaseProblem prob;
    prob.model = model;
    prob.grid = grid;
    prob.h = [&](const Vec& x) {
        return cfg.h_x * x[0] + cfg.h_y * x[1] + cfg.h_z * x[2] + cfg.h_const;
    };
    prob.f1 = [&](const Vec&) { return cfg.f1; };
    prob.f2 = [&](const Vec&) { return cfg.f2; };
    prob.f_bound = std::max({1.0, std::abs(cfg.f1), std::abs(cfg.f2)});
    prob.opts.rel_tol = cfg.solver_tol;
    prob.opts.max_sweeps = cfg.max_sweeps;
    prob.opts.max_outer = cfg.max_outer;

    FreeBoundarySolution sol = two_phase_solve(prob);
    fs::path ucsv = out / "solution.csv";
    write_field_csv(sol.u, ucsv.string());
    rep.files.push_back(ucsv.string());

    {
        fs::path icsv = out / "interface.csv";
        std::ofstream os(icsv.string(), std::ios::binary);
        os << "x,y,z\n";
        for (const Vec& p : sol.interface_points)
            os << format_double(p[0]) << ',' << format_double(p[1]) << ',' << format_double(p[2])
               << '\n';
        rep.files.push_back(icsv.string());
    }

    rep.constants.emplace_back("residual", sol.residual);
    rep.constants.emplace_back("outer_iterations", sol.outer_iterations);
    rep.constants.emplace_back("sweeps", (double)sol.sweeps);

    if (!sol.converged) {
        throw nonconvergence_error("sign-pattern iteration did not converge (" +
                                   std::to_string(sol.outer_iterations) + " outer iterations, " +
                                   std::to_string(sol.sweeps) + " sweeps)");
    }
    double h = grid->h();
    VerdictRow vr;
    vr.name = "phase residual <= 10 h^2 * scale";
    vr.op = "two_phase_solve";
    vr.value = sol.residual;
    vr.tolerance = 10.0 * h * h * sol.data_scale;
    vr.pass = sol.residual <= vr.tolerance;
    rep.verdicts.push_back(vr);

    if (!sol.interface_points.empty()) {
        LipschitzReport lr = lipschitz_ratio(sol, cfg.lipschitz_k.value_or(0.75 * grid->R));
        rep.constants.emplace_back("lipschitz_sup_ratio", lr.sup_ratio);
        VerdictRow vl;
        vl.name = "lipschitz ratio finite";
        vl.op = "lipschitz_ratio";
        vl.value = lr.sup_ratio;
        vl.pass = std::isfinite(lr.sup_ratio);
        vl.note = lr.vacuous ? "vacuous (empty free boundary)" : "";
        rep.verdicts.push_back(vl);

        if (cfg.flux_g != "none") {
            auto G = cfg.flux_g == "diff"
                         ? std::function<double(double, double)>(
                               [](double a, double b) { return a - b; })
                         : std::function<double(double, double)>(
                               [](double a, double b) { return a * b - 1.0; });
            auto flux = flux_balance_check(sol, G);
            fs::path fcsv = out / "flux.csv";
            std::ofstream os(fcsv.string(), std::ios::binary);
            os << "node,grad_plus,grad_minus,G\n";
            for (const auto& s : flux)
                os << s.node << ',' << format_double(s.grad_plus) << ','
                   << format_double(s.grad_minus) << ',' << format_double(s.G_value) << '\n';
            rep.files.push_back(fcsv.string());
        }
    }
}

void do_hebey(const ExperimentConfig& cfg, const ModelMetric& model, Report& rep) {
    double radius = cfg.hebey_radius.value_or(std::min(0.8, model.working_radius()));
    double step = cfg.fd_step.value_or(-1.0);
    double K = cfg.hebey_K.value_or(-1.0);
    if (K < 0.0) {
        K = hebey_fit_K(model, radius, step);
        rep.constants.emplace_back("fitted_K", K);
        K *= 1.0 + 1e-9; // verify at the fit
    }
    HebeyReport hr = hebey_verify(model, radius, K, step);
    rep.constants.emplace_back("K", K);
    rep.constants.emplace_back("worst_ratio", hr.worst_ratio);
    rep.constants.emplace_back("min_eig", hr.min_eig);
    rep.constants.emplace_back("max_eig", hr.max_eig);
    VerdictRow v;
    v.name = "normal-coordinate bounds";
    v.op = "hebey_verify";
    v.value = hr.worst_ratio;
    v.tolerance = 1.0;
    v.pass = hr.pass;
    rep.verdicts.push_back(v);
}

void do_calibrate(const ExperimentConfig& cfg, const ModelMetric& model,
                  std::shared_ptr<const BallGrid> grid, const fs::path& out, Report& rep) {
    std::vector<Pair> family;
    if (cfg.n == 2) {
        family.push_back(make_plane_pair(grid, Vec{1, 0, 0}));
        family.push_back(make_plane_pair(grid, Vec{1, 1, 0}));
        family.push_back(make_plane_pair(grid, Vec{0, 1, 0}));
    } else {
        family.push_back(make_plane_pair(grid, Vec{1, 0, 0}));
        family.push_back(make_plane_pair(grid, Vec{0, 0, 1}));
        family.push_back(make_plane_pair(grid, Vec{1, 0, 1}));
    }
    std::vector<double> radii = scan_radii(cfg, *grid);
    CalibrationResult cal = calibrate_c0(model, family, radii);
    if (!cal.found)
        throw numerical_error("calibration failed: no c0 on the grid makes phi monotone");
    rep.constants.emplace_back("c0", cal.c0);
    rep.constants.emplace_back("largest_failing_c0", cal.largest_failing);
    for (size_t i = 0; i < cal.traces.size(); ++i) {
        fs::path csv = out / ("trace_" + std::to_string(i) + ".csv");
        emit_csv(cal.traces[i], csv.string());
        rep.files.push_back(csv.string());
    }
    VerdictRow v;
    v.name = "calibrated c0 exists on grid";
    v.op = "calibrate_c0";
    v.value = cal.c0;
    v.pass = true;
    rep.verdicts.push_back(v);
}

} // namespace

Report run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                      int resolution_scale) {
    Report rep;
    rep.config = cfg;
    auto t0 = std::chrono::steady_clock::now();
    fs::path out(out_dir);
    try {
        if (resolution_scale < 1 || resolution_scale > 64)
            throw config_error("resolution scale must lie in [1, 64]");
        fs::create_directories(out);
        ModelMetric model = cfg.make_model();
        rep.model_desc = model.describe();
        switch (cfg.kind) {
            case ExperimentKind::scan:
                do_scan(cfg, model, cfg.make_grid(model, resolution_scale), out, rep);
                break;
            case ExperimentKind::bound:
                do_bound(cfg, model, cfg.make_grid(model, resolution_scale), out, rep);
                break;
            case ExperimentKind::dyadic:
                do_dyadic(cfg, model, cfg.make_grid(model, resolution_scale), out, rep);
                break;
            case ExperimentKind::fh: do_fh(cfg, out, rep); break;
            case ExperimentKind::solve:
                do_solve(cfg, model, cfg.make_grid(model, resolution_scale), out, rep);
                break;
            case ExperimentKind::hebey: do_hebey(cfg, model, rep); break;
            case ExperimentKind::calibrate:
                do_calibrate(cfg, model, cfg.make_grid(model, resolution_scale), out, rep);
                break;
        }
        rep.exit_code = rep.all_pass() ? kExitOk : 1;
    } catch (const config_error& e) {
        rep.exit_code = kExitConfig;
        rep.error = e.what();
    } catch (const domain_error& e) {
        rep.exit_code = kExitConfig;
        rep.error = e.what();
    } catch (const nonconvergence_error& e) {
        rep.exit_code = kExitNonconvergence;
        rep.error = e.what();
    } catch (const numerical_error& e) {
        rep.exit_code = kExitNumerical;
        rep.error = e.what();
    }
    rep.runtime_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        if (fs::exists(out)) {
            write_report(rep, (out / "report.txt").string());
        }
    } catch (...) {
        // reporting must not mask the experiment outcome
    }
    return rep;
}

void write_report(const Report& rep, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) return;
    os << kArtifactVersion << "\n";
    os << "kind: " << rep.config.kind_name() << "\n";
    os << "model: " << rep.model_desc << "\n";
    os << "config:\n";
    for (const auto& [k, v] : rep.config.raw) os << "  " << k << " = " << v << "\n";
    os << "verdicts:\n";
    for (const auto& v : rep.verdicts) {
        os << "  [" << (v.pass ? "PASS" : "FAIL") << "] " << v.name << " (op " << v.op
           << ", value " << format_double(v.value) << ", tol " << format_double(v.tolerance)
           << ")";
        if (!v.note.empty()) os << " -- " << v.note;
        os << "\n";
    }
    os << "constants:\n";
    for (const auto& [k, v] : rep.constants) os << "  " << k << " = " << format_double(v) << "\n";
    os << "files:\n";
    for (const auto& f : rep.files) os << "  " << f << "\n";
    if (!rep.error.empty()) os << "error: " << rep.error << "\n";
    os << "runtime_sec: " << rep.runtime_sec << "\n";
    os << "exit_code: " << rep.exit_code << "\n";
}

} // namespace monolab
