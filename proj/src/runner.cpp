#include "pmstab/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "pmstab/errors.hpp"
#include "pmstab/stability.hpp"
#include "pmstab/symbols.hpp"

namespace pmstab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("out_dir", "cannot write " + path.string());
    out << content;
}

json config_json(const RunConfig& cfg) {
    json j;
    j["alpha"] = cfg.params.alpha;
    j["beta"] = cfg.params.beta;
    j["beta1"] = cfg.params.beta1;
    j["beta2"] = cfg.params.beta2;
    j["rho0"] = cfg.params.rho0;
    j["rho1"] = cfg.params.rho1;
    j["rho2"] = cfg.params.rho2;
    j["sigma"] = cfg.params.sigma;
    j["m"] = cfg.params.m;
    j["kappa"] = cfg.params.kappa;
    j["mu"] = cfg.params.mu;
    j["r_in"] = cfg.geom.r_in;
    j["r_out"] = cfg.geom.r_out;
    j["n_annulus"] = cfg.n_annulus;
    j["n_disk"] = cfg.n_disk;
    j["k_max"] = cfg.k_max;
    j["experiment"] = to_string(cfg.experiment);
    j["lambda_min"] = cfg.lambda_min;
    j["lambda_max"] = cfg.lambda_max;
    j["lambda_per_decade"] = cfg.lambda_per_decade;
    j["scan_k_step"] = cfg.scan_k_step;
    j["t_final"] = cfg.t_final;
    j["dt"] = cfg.dt;
    j["preset"] = cfg.preset;
    j["modes"] = cfg.modes;
    j["system"] = cfg.system;
    j["symbol_density"] = cfg.symbol_density;
    j["ls_grid"] = cfg.ls_grid;
    j["gc_x0"] = {cfg.gc_x0_x, cfg.gc_x0_y};
    j["out_dir"] = cfg.out_dir;
    j["seed"] = cfg.seed;
    return j;
}

json tolerances_json() {
    return json{{"verdict_exponential_abscissa", -1e-3},
                {"verdict_exponential_max_slope", 0.1},
                {"verdict_polynomial_min_slope", 0.25},
                {"verdict_polynomial_max_residual", 0.15},
                {"abscissa_tail_slack", 1.02}};
}

Preset preset_from_string(const std::string& s) {
    if (s == "plate_bump") return Preset::plate_bump;
    if (s == "membrane_bump") return Preset::membrane_bump;
    if (s == "thermal_spot") return Preset::thermal_spot;
    return Preset::mixed;
}

SystemKind system_from_string(const std::string& s) {
    return s == "membrane_dirichlet" ? SystemKind::membrane_dirichlet
                                     : SystemKind::full;
}

EvolveOptions evolve_options(const RunConfig& cfg) {
    EvolveOptions opt;
    opt.modes = cfg.modes;
    opt.preset = preset_from_string(cfg.preset);
    opt.t_final = cfg.t_final;
    opt.dt = cfg.dt;
    opt.n_annulus = cfg.n_annulus;
    opt.n_disk = cfg.n_disk;
    opt.kind = system_from_string(cfg.system);
    return opt;
}

// Spectra, abscissa profile, resolvent scan and verdict for one config,
// computed on the shared mode family.
struct ClassifyOutcome {
    std::vector<int> ks;
    std::vector<double> abscissa;
    std::vector<Eigen::VectorXcd> spectra;
    ResolventScan scan;
    GrowthFit fit;
    StabilityVerdict verdict = StabilityVerdict::inconclusive;
};

ClassifyOutcome classify_pipeline(const RunConfig& cfg) {
    ClassifyOutcome out;
    std::vector<ModeOperator> ops;
    for (int k = 0; k <= cfg.k_max; k += cfg.scan_k_step) {
        const ModeGrid grid = build_mode_grid(cfg.geom, k, cfg.n_annulus, cfg.n_disk);
        ops.push_back(assemble(cfg.params, grid, system_from_string(cfg.system)));
        out.ks.push_back(k);
        out.spectra.push_back(spectrum(ops.back()));
        out.abscissa.push_back(out.spectra.back()[0].real());
    }
    out.scan = resolvent_scan(ops, cfg.lambda_min, cfg.lambda_max, cfg.lambda_per_decade);
    out.fit = growth_exponent_fit(out.scan);

    out.verdict = classify(out.ks, out.abscissa, out.fit);
    return out;
}

void write_spectrum_csv(const fs::path& path, const ClassifyOutcome& oc) {
    std::string csv = "k,re,im\n";
    for (size_t i = 0; i < oc.ks.size(); ++i)
        for (int j = 0; j < oc.spectra[i].size(); ++j)
            csv += std::to_string(oc.ks[i]) + "," + fmt(oc.spectra[i][j].real()) + "," +
                   fmt(oc.spectra[i][j].imag()) + "\n";
    write_text(path, csv);
}

void write_resolvent_csv(const fs::path& path, const ResolventScan& scan) {
    std::string csv = "lambda,norm,k_argmax\n";
    for (size_t i = 0; i < scan.lambdas.size(); ++i)
        csv += fmt(scan.lambdas[i]) + "," + fmt(scan.norms[i]) + "," +
               std::to_string(scan.per_mode[i]) + "\n";
    write_text(path, csv);
}

json fit_json(const GrowthFit& fit) {
    return json{{"r_est", fit.r_est},
                {"r_stderr", fit.r_stderr},
                {"intercept", fit.intercept},
                {"residual_decades", fit.residual},
                {"n_peaks", fit.n_peaks},
                {"used_peaks", fit.used_peaks},
                {"inconclusive", fit.inconclusive}};
}

json classify_json(const ClassifyOutcome& oc) {
    return json{{"k", oc.ks},
                {"spectral_abscissa", oc.abscissa},
                {"growth_fit", fit_json(oc.fit)},
                {"verdict", to_string(oc.verdict)}};
}

json run_spectrum_experiment(const RunConfig& cfg, const fs::path& out) {
    const ClassifyOutcome oc = classify_pipeline(cfg);
    write_spectrum_csv(out / "spectrum.csv", oc);
    write_resolvent_csv(out / "resolvent.csv", oc.scan);
    return classify_json(oc);
}

json run_resolvent_experiment(const RunConfig& cfg, const fs::path& out) {
    const ClassifyOutcome oc = classify_pipeline(cfg);
    write_resolvent_csv(out / "resolvent.csv", oc.scan);
    write_text(out / "resolvent.gnuplot",
               "set logscale xy\nset xlabel 'lambda'\nset ylabel 'resolvent norm'\n"
               "plot 'resolvent.csv' using 1:2 with linespoints notitle\n");
    return classify_json(oc);
}

json trajectory_json(const EnergyTrajectory& traj, const DecayFit& fit) {
    json j;
    j["steps"] = traj.times.size() - 1;
    j["energy_initial"] = traj.energies.front();
    j["energy_final"] = traj.energies.back();
    j["dissipation_integral"] = traj.dissipation_integral.back();
    j["balance_defect"] = std::abs(traj.energies.front() - traj.energies.back() -
                                   traj.dissipation_integral.back());
    j["decay_fit"] = json{{"gamma", fit.gamma},
                          {"gamma_stderr", fit.gamma_stderr},
                          {"omega", fit.omega},
                          {"r2_algebraic", fit.r2_algebraic},
                          {"r2_exponential", fit.r2_exponential},
                          {"r_hat", fit.r_hat},
                          {"exponential_better", fit.exponential_better},
                          {"inconclusive", fit.inconclusive}};
    return j;
}

void write_trajectory_csv(const fs::path& path, const EnergyTrajectory& traj) {
    std::string csv = "t,E,D_integral\n";
    for (size_t i = 0; i < traj.times.size(); ++i)
        csv += fmt(traj.times[i]) + "," + fmt(traj.energies[i]) + "," +
               fmt(traj.dissipation_integral[i]) + "\n";
    write_text(path, csv);
}

json run_evolve_experiment(const RunConfig& cfg, const fs::path& out) {
    const EnergyTrajectory traj = evolve(cfg.params, cfg.geom, evolve_options(cfg));
    const DecayFit fit = fit_decay(traj, cfg.t_final / 10.0);
    write_trajectory_csv(out / "trajectory.csv", traj);
    write_text(out / "trajectory.gnuplot",
               "set logscale y\nset xlabel 't'\nset ylabel 'E(t)'\n"
               "plot 'trajectory.csv' using 1:2 with lines notitle\n");
    return trajectory_json(traj, fit);
}

json run_decay_experiment(const RunConfig& cfg, const fs::path& out) {
    EvolveOptions opt = evolve_options(cfg);
    opt.smooth_by_inverse = true;
    opt.frequency_cutoff = 0.2 / opt.dt;
    const EnergyTrajectory traj = evolve(cfg.params, cfg.geom, opt);
    const DecayFit fit = fit_decay(traj, cfg.t_final / 20.0);
    write_trajectory_csv(out / "decay_trajectory.csv", traj);
    return trajectory_json(traj, fit);
}

json run_symbol_experiment(const RunConfig& cfg, const fs::path& out) {
    const EllipticityScan scan = ellipticity_scan(cfg.params, cfg.symbol_density);
    std::string csv = "lambda_re,lambda_im,xi1,xi2,abs_det\n";
    for (const SymbolSample& s : scan.slice)
        csv += fmt(s.lambda_re) + "," + fmt(s.lambda_im) + "," + fmt(s.xi1) + "," +
               fmt(s.xi2) + "," + fmt(s.value) + "\n";
    write_text(out / "symbol_scan.csv", csv);

    const CubicCoeffs cubic = characteristic_cubic(cfg.params, 1.0);
    const auto roots = cubic_roots(cubic);
    json j;
    j["min_abs_det"] = scan.min_abs_det;
    j["argmin"] = {{"lambda_re", scan.argmin.lambda.real()},
                   {"lambda_im", scan.argmin.lambda.imag()},
                   {"xi", {scan.argmin.xi[0], scan.argmin.xi[1]}}};
    j["cubic"] = {{"a", cubic.a}, {"b", cubic.b}, {"c", cubic.c}};
    j["hurwitz_stable"] = hurwitz_stable(cubic);
    j["cubic_roots"] = json::array();
    for (const Complex& r : roots) j["cubic_roots"].push_back({r.real(), r.imag()});
    j["elliptic"] = scan.min_abs_det > 0.0;
    return j;
}

json run_ls_experiment(const RunConfig& cfg, const fs::path& out) {
    json j;
    for (LsBoundarySet set : {LsBoundarySet::clamped_robin, LsBoundarySet::free_robin}) {
        const bool clamped = set == LsBoundarySet::clamped_robin;
        std::string csv = "lambda_re,lambda_im,xi1,xi2,min_sv\n";
        double min_sv = std::numeric_limits<double>::infinity();
        const int g = cfg.ls_grid;
        for (int i = 0; i < g; ++i) {
            const double xi1 = -1.0 + 2.0 * double(i) / (g - 1);
            for (int p = 0; p < g; ++p) {
                const double phi = -M_PI / 2.0 + M_PI * double(p) / (g - 1);
                const double mag = 1.0 - xi1 * xi1;
                const Complex lambda = mag * Complex(std::cos(phi), std::sin(phi));
                LsProblem problem{cfg.params, xi1, lambda, set};
                const double sv = lopatinskii_shapiro_check(problem);
                min_sv = std::min(min_sv, sv);
                csv += fmt(lambda.real()) + "," + fmt(lambda.imag()) + "," + fmt(xi1) +
                       ",0," + fmt(sv) + "\n";
            }
        }
        write_text(out / (clamped ? "ls_check_clamped.csv" : "ls_check_free.csv"), csv);
        j[clamped ? "clamped_robin" : "free_robin"] = {{"min_sv", min_sv}};
    }
    return j;
}

json run_gc_experiment(const RunConfig& cfg, const fs::path& out) {
    const Eigen::Vector2d x0(cfg.gc_x0_x, cfg.gc_x0_y);
    const GcScanResult gc = geometric_condition_scan(cfg.geom, x0);
    std::string csv = "theta,q_dot_nu\n";
    const int samples = 360;
    for (int i = 0; i < samples; ++i) {
        const double theta = 2.0 * M_PI * i / samples;
        const double v = -cfg.geom.r_in +
                         x0.dot(Eigen::Vector2d(std::cos(theta), std::sin(theta)));
        csv += fmt(theta) + "," + fmt(v) + "\n";
    }
    write_text(out / "gc_scan.csv", csv);
    return json{{"min", gc.min}, {"max", gc.max}, {"satisfied", gc.satisfied()}};
}

json dispatch(const RunConfig& cfg, Experiment e, const fs::path& out) {
    switch (e) {
    case Experiment::spectrum: return run_spectrum_experiment(cfg, out);
    case Experiment::resolvent: return run_resolvent_experiment(cfg, out);
    case Experiment::evolve: return run_evolve_experiment(cfg, out);
    case Experiment::decay_probe: return run_decay_experiment(cfg, out);
    case Experiment::symbol_scan: return run_symbol_experiment(cfg, out);
    case Experiment::ls_check: return run_ls_experiment(cfg, out);
    case Experiment::gc_scan: return run_gc_experiment(cfg, out);
    case Experiment::all: break;
    }
    json j;
    j[to_string(Experiment::spectrum)] = run_spectrum_experiment(cfg, out);
    j[to_string(Experiment::resolvent)] = run_resolvent_experiment(cfg, out);
    j[to_string(Experiment::evolve)] = run_evolve_experiment(cfg, out);
    j[to_string(Experiment::decay_probe)] = run_decay_experiment(cfg, out);
    j[to_string(Experiment::symbol_scan)] = run_symbol_experiment(cfg, out);
    j[to_string(Experiment::ls_check)] = run_ls_experiment(cfg, out);
    j[to_string(Experiment::gc_scan)] = run_gc_experiment(cfg, out);
    return j;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace

int run(const RunConfig& config) {
    return guarded([&]() {
        config.validate();
        const auto t0 = std::chrono::steady_clock::now();
        const fs::path out(config.out_dir);
        fs::create_directories(out);

        json report;
        report["schema_version"] = 1;
        report["experiment"] = to_string(config.experiment);
        report["config"] = config_json(config);
        report["seed"] = config.seed;
        report["tolerances"] = tolerances_json();
        report["results"] = dispatch(config, config.experiment, out);
        report["wall_time_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        write_text(out / "report.json", report.dump(2) + "\n");
        write_text(out / "config.txt", config.serialize());
        return 0;
    });
}

int compare(const RunConfig& config_a, const RunConfig& config_b,
            const std::string& out_dir) {
    return guarded([&]() {
        config_a.validate();
        config_b.validate();
        auto structural = [](const RunConfig& c) {
            RunConfig s = c;
            s.params = PhysicalParams{};
            s.out_dir = "";
            s.seed = 0;
            return s.serialize();
        };
        if (structural(config_a) != structural(config_b))
            throw UsageError("compare: configs may differ only in the physical "
                             "constants, out_dir and seed");

        const auto t0 = std::chrono::steady_clock::now();
        const ClassifyOutcome a = classify_pipeline(config_a);
        const ClassifyOutcome b = classify_pipeline(config_b);

        json diff = json::object();
        const json ja = config_json(config_a), jb = config_json(config_b);
        for (const char* key : {"alpha", "beta", "beta1", "beta2", "rho0", "rho1",
                                "rho2", "sigma", "m", "kappa", "mu"})
            if (ja[key] != jb[key]) diff[key] = {ja[key], jb[key]};

        json report;
        report["schema_version"] = 1;
        report["experiment"] = "compare";
        report["config_a"] = ja;
        report["config_b"] = jb;
        report["diff"] = diff;
        report["a"] = classify_json(a);
        report["b"] = classify_json(b);
        report["a"]["envelope"] = {{"lambda", a.scan.lambdas}, {"norm", a.scan.norms}};
        report["b"]["envelope"] = {{"lambda", b.scan.lambdas}, {"norm", b.scan.norms}};
        report["tolerances"] = tolerances_json();
        report["wall_time_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        const fs::path out(out_dir);
        fs::create_directories(out);
        write_text(out / "compare.json", report.dump(2) + "\n");
        return 0;
    });
}

int dump_grids(const RunConfig& config) {
    return guarded([&]() {
        config.validate();
        const fs::path out(config.out_dir);
        fs::create_directories(out);
        const ModeGrid grid = build_mode_grid(config.geom, 0, config.n_annulus,
                                              config.n_disk);
        std::string csv = "r,weight\n";
        for (int i = 0; i < grid.n_annulus; ++i)
            csv += fmt(grid.annulus.nodes[i]) + "," + fmt(grid.annulus.quad[i]) + "\n";
        write_text(out / "grid_annulus.csv", csv);
        csv = "r,weight\n";
        for (int i = 0; i < grid.n_disk; ++i)
            csv += fmt(grid.disk.nodes[i]) + "," + fmt(grid.disk.quad[i]) + "\n";
        write_text(out / "grid_disk.csv", csv);
        return 0;
    });
}

namespace {

void write_matrix_binary(const fs::path& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("out_dir", "cannot write " + path.string());
    const char magic[8] = {'P', 'M', 'S', 'T', 'A', 'B', '0', '1'};
    out.write(magic, 8);
    const std::int64_t rows = m.rows(), cols = m.cols();
    out.write(reinterpret_cast<const char*>(&rows), 8);
    out.write(reinterpret_cast<const char*>(&cols), 8);
    for (std::int64_t i = 0; i < rows; ++i)
        for (std::int64_t j = 0; j < cols; ++j) {
            const double v = m(i, j);
            out.write(reinterpret_cast<const char*>(&v), 8);
        }
}

} // namespace

int dump_operators(const RunConfig& config) {
    return guarded([&]() {
        config.validate();
        const fs::path out(config.out_dir);
        fs::create_directories(out);
        for (int k = 0; k <= config.k_max; k += config.scan_k_step) {
            const ModeGrid grid =
                build_mode_grid(config.geom, k, config.n_annulus, config.n_disk);
            const ModeOperator op =
                assemble(config.params, grid, system_from_string(config.system));
            write_matrix_binary(out / ("op_k" + std::to_string(k) + "_reduced.bin"),
                                op.reduced);
            write_matrix_binary(out / ("op_k" + std::to_string(k) + "_gram.bin"),
                                op.gram);
        }
        return 0;
    });
}

} // namespace pmstab
