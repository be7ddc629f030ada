#include "qbd/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "qbd/analysis/cutoff.hpp"
#include "qbd/analysis/dispersion.hpp"
#include "qbd/analysis/thermo.hpp"
#include "qbd/cli/manifest.hpp"
#include "qbd/core/constants.hpp"
#include "qbd/core/csv.hpp"
#include "qbd/core/parallel.hpp"
#include "qbd/langevin/ensemble.hpp"
#include "qbd/langevin/integrate.hpp"
#include "qbd/noise/noise.hpp"
#include "qbd/pde/kramers.hpp"
#include "qbd/pde/smoluchowski.hpp"

namespace qbd::cli {

namespace fs = std::filesystem;

namespace {

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::string out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    return (fs::path(cfg.out_dir) / name).string();
}

double resolve_cutoff(const RunConfig& cfg) {
    if (!cfg.cutoff_auto) return cfg.cutoff;
    if (cfg.params.hbar == 0.0) return cfg.time_grid.nyquist();
    return analysis::solve_cutoff(cfg.params).Omega;
}

int finish(const RunConfig& cfg, Manifest& man, const Timer& timer) {
    man.set_elapsed(timer.seconds());
    man.write(out_path(cfg, "manifest.json"));
    return man.all_passed() ? 0 : 2;
}

} // namespace

int cmd_noise(const RunConfig& cfg) {
    Timer timer;
    Manifest man("noise", to_json(cfg), cfg.seed);
    const double cutoff = resolve_cutoff(cfg);
    man.set_diagnostic("cutoff", cutoff);

    // spectrum table at the positive grid frequencies
    {
        CsvWriter w(out_path(cfg, "spectrum.csv"));
        w.comment("two-sided Langevin force spectral density per component");
        w.comment("cutoff=" + format_double(cutoff));
        const std::vector<std::string> names{"omega", "S_FF"};
        w.header(names);
        for (std::size_t k = 0; k <= cfg.time_grid.n / 2; ++k) {
            const double omega = static_cast<double>(k) * cfg.time_grid.domega();
            w.row(std::vector<double>{omega, noise::fdt_spectral_density(omega, cfg.params)});
        }
        w.close();
        man.add_output(out_path(cfg, "spectrum.csv"));
    }

    std::vector<noise::NoiseTrajectory> trajs(static_cast<std::size_t>(cfg.realizations));
    parallel_for(trajs.size(), cfg.threads, [&](std::size_t i) {
        trajs[i] = noise::sample_noise(cfg.time_grid, cfg.params, cutoff, cfg.seed,
                                       cfg.params.d, i);
    });
    const int n_export = std::min(cfg.realizations, 2);
    for (int i = 0; i < n_export; ++i) {
        const std::string p = out_path(cfg, "trajectory_" + std::to_string(i) + ".csv");
        noise::export_csv(trajs[static_cast<std::size_t>(i)], p);
        man.add_output(p);
    }

    const auto est = noise::periodogram(trajs, cfg.bands);
    {
        CsvWriter w(out_path(cfg, "periodogram.csv"));
        w.comment("band-averaged periodogram vs target spectrum");
        const std::vector<std::string> names{"omega", "power", "std_error", "target", "ratio"};
        w.header(names);
        for (std::size_t b = 0; b < est.power.size(); ++b)
            w.row(std::vector<double>{est.omega[b], est.power[b], est.std_error[b],
                                      est.target[b], est.power[b] / est.target[b]});
        w.close();
        man.add_output(out_path(cfg, "periodogram.csv"));
    }

    // fidelity over bands fully below the cutoff
    double worst = 0.0;
    int counted = 0;
    for (std::size_t b = 0; b < est.power.size(); ++b) {
        const double band_hi =
            est.omega[b] + 0.5 * (est.omega.size() > 1 ? est.omega[1] - est.omega[0] : 0.0);
        if (band_hi > cutoff) continue;
        worst = std::max(worst, std::fabs(est.power[b] / est.target[b] - 1.0));
        ++counted;
    }
    man.set_diagnostic("bands_below_cutoff", counted);
    if (counted > 0)
        man.add_check("periodogram_within_5pct_below_cutoff", worst < 0.05, worst, 0.05);
    else
        man.add_check("periodogram_has_bands_below_cutoff", false, 0.0, 1.0);
    return finish(cfg, man, timer);
}

int cmd_langevin(const RunConfig& cfg) {
    Timer timer;
    Manifest man("langevin", to_json(cfg), cfg.seed);
    const double cutoff = resolve_cutoff(cfg);
    man.set_diagnostic("cutoff", cutoff);
    const auto potential = build_potential(cfg);

    langevin::EnsembleOptions opts;
    opts.realizations = cfg.realizations;
    opts.burn_in = cfg.burn_in;
    opts.threads = cfg.threads;
    opts.hist_bins = cfg.hist_bins;
    opts.hist_halfwidth = (cfg.hist_halfwidth > 0.0)
                              ? cfg.hist_halfwidth
                              : 4.0 * std::sqrt(cfg.params.T);
    const auto stats =
        langevin::run_ensemble(potential, cfg.params, cfg.time_grid, cutoff, cfg.seed, opts);

    // one sample trajectory for inspection
    {
        const auto force =
            noise::sample_noise(cfg.time_grid, cfg.params, cutoff, cfg.seed, cfg.params.d, 0);
        std::vector<double> zeros(static_cast<std::size_t>(cfg.params.d), 0.0);
        const auto traj =
            langevin::integrate(potential, cfg.params, cfg.time_grid, force, zeros, zeros);
        const std::string p = out_path(cfg, "trajectory_0.csv");
        langevin::export_csv(traj, p);
        man.add_output(p);
    }
    {
        CsvWriter w(out_path(cfg, "histogram.csv"));
        w.comment("position histogram, first component, post burn-in");
        const std::vector<std::string> names{"r_lo", "r_hi", "count"};
        w.header(names);
        for (std::size_t b = 0; b + 1 < stats.hist_edges.size(); ++b)
            w.row(std::vector<double>{stats.hist_edges[b], stats.hist_edges[b + 1],
                                      stats.hist_counts[b]});
        w.close();
        man.add_output(out_path(cfg, "histogram.csv"));
    }

    nlohmann::ordered_json sj;
    sj["p_squared"] = {{"mean", stats.p_squared.mean},
                       {"std_error", stats.p_squared.std_error},
                       {"dispersion", stats.p_squared.dispersion},
                       {"realizations", stats.realizations}};
    sj["burn_in"] = stats.burn_in;
    sj["warnings"] = stats.warnings;
    man.set_diagnostic("ensemble", sj);

    if (stats.free_particle) {
        const double expect = cfg.params.d * cfg.params.m * cfg.params.T;
        const double dev = std::fabs(stats.p_squared.mean - expect);
        const double limit = 3.0 * stats.p_squared.std_error;
        man.add_check("equipartition_within_3_sigma", dev < limit, dev, limit);
    }
    return finish(cfg, man, timer);
}

int cmd_cutoff(const RunConfig& cfg) {
    Timer timer;
    Manifest man("cutoff", to_json(cfg), cfg.seed);
    double lo = 0.01, hi = 10.0;
    int steps = 25;
    if (cfg.sweep_key == "theta") {
        lo = cfg.sweep_start;
        hi = cfg.sweep_stop;
        steps = cfg.sweep_steps;
    }

    CsvWriter w(out_path(cfg, "cutoff_sweep.csv"));
    w.comment("cutoff frequency vs quantum-friction group theta = beta*hbar*gamma");
    w.comment("ratio = Omega / sqrt(2*pi*gamma*T/hbar)");
    const std::vector<std::string> names{"theta", "Omega", "ratio", "residual", "iterations"};
    w.header(names);

    bool residual_ok = true, ratio_ok = true, monotone_ok = true;
    double prev_omega = 0.0;
    double worst_res = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / (steps - 1);
        const double theta = lo * std::pow(hi / lo, t);
        BathParams p = cfg.params;
        p.hbar = theta * p.T / p.gamma; // theta sweep at fixed gamma, T
        const auto res = analysis::solve_cutoff(p);
        const double geo = std::sqrt(2.0 * std::numbers::pi * p.gamma * p.T / p.hbar);
        const double ratio = res.Omega / geo;
        w.row(std::vector<double>{theta, res.Omega, ratio, res.residual,
                                  static_cast<double>(res.iterations)});
        worst_res = std::max(worst_res, std::fabs(res.residual));
        residual_ok = residual_ok && std::fabs(res.residual) < 1e-10;
        ratio_ok = ratio_ok && ratio > 0.5 && ratio < 2.0;
        if (i > 0 && res.Omega >= prev_omega) monotone_ok = false; // Omega falls as hbar grows
        prev_omega = res.Omega;
    }
    w.close();
    man.add_output(out_path(cfg, "cutoff_sweep.csv"));
    man.add_check("residuals_below_1e-10", residual_ok, worst_res, 1e-10);
    man.add_check("ratio_within_geometric_mean_band", ratio_ok, ratio_ok ? 1.0 : 0.0, 1.0);
    man.add_check("Omega_monotone_in_theta", monotone_ok, monotone_ok ? 1.0 : 0.0, 1.0);
    return finish(cfg, man, timer);
}

int cmd_dispersion(const RunConfig& cfg) {
    Timer timer;
    Manifest man("dispersion", to_json(cfg), cfg.seed);
    double lo = 1e-3 * cfg.params.gamma, hi = 1e3 * cfg.params.gamma;
    int steps = 61;
    if (cfg.sweep_key == "omega") {
        lo = cfg.sweep_start;
        hi = cfg.sweep_stop;
        steps = cfg.sweep_steps;
    }

    CsvWriter w(out_path(cfg, "dispersion.csv"));
    w.comment("dissipative-pattern dispersion: q^2(omega), both branches");
    const std::vector<std::string> names{"omega",  "re_q2",   "im_q2",  "re_q2_alt",
                                         "im_q2_alt", "residual"};
    w.header(names);
    bool residual_ok = true;
    double worst = 0.0, last_im = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / (steps - 1);
        const double omega = lo * std::pow(hi / lo, t);
        const auto sol = analysis::dispersion_q2(omega, cfg.params);
        w.row(std::vector<double>{omega, sol.q2_physical.real(), sol.q2_physical.imag(),
                                  sol.q2_secondary.real(), sol.q2_secondary.imag(),
                                  sol.residual_physical});
        worst = std::max(worst, sol.residual_physical);
        residual_ok = residual_ok && sol.residual_physical < 1e-10;
        last_im = sol.q2_physical.imag();
    }
    w.close();
    man.add_output(out_path(cfg, "dispersion.csv"));
    man.add_check("residual_below_1e-10", residual_ok, worst, 1e-10);

    // quantum high-frequency plateau, applicable without radiation only
    if (cfg.params.tau == 0.0 && cfg.params.hbar > 0.0) {
        const double x_hi = cfg.params.beta() * cfg.params.hbar * hi;
        if (x_hi > 40.0 && hi > 100.0 * cfg.params.gamma) {
            const double plateau = 2.0 * cfg.params.m * cfg.params.gamma / cfg.params.hbar;
            const double dev = std::fabs(last_im / plateau - 1.0);
            man.add_check("high_frequency_plateau_1pct", dev < 0.01, dev, 0.01);
        }
    }
    return finish(cfg, man, timer);
}

int cmd_kramers(const RunConfig& cfg) {
    Timer timer;
    Manifest man("kramers", to_json(cfg), cfg.seed);
    const auto potential = build_potential(cfg);
    const double p_max =
        (cfg.p_max > 0.0) ? cfg.p_max : 7.0 * std::sqrt(cfg.params.m * cfg.params.T);

    BathParams init = cfg.params;
    init.T = cfg.params.T * cfg.init_temp_factor;
    const auto f0 = pde::maxwell_boltzmann(cfg.space_grid, static_cast<std::size_t>(cfg.np),
                                           p_max, potential, init);

    pde::KramersOptions opts;
    opts.dt = cfg.pde_dt;
    opts.save_every = cfg.save_every;
    opts.quantum_correction = cfg.quantum_correction;
    opts.radiation_correction = cfg.radiation_correction;
    const auto res = pde::solve_kramers(f0, potential, cfg.params, cfg.t_end, opts);

    // marginal density per snapshot
    {
        CsvWriter w(out_path(cfg, "marginals.csv"));
        w.comment("configurational marginal rho(r) per saved time");
        const std::vector<std::string> names{"t", "r", "rho"};
        w.header(names);
        for (const auto& snap : res.snapshots) {
            const double dp = snap.dp();
            for (std::size_t j = 0; j < snap.nr(); ++j) {
                double rho = 0.0;
                for (std::size_t i = 0; i < snap.np; ++i) rho += snap.at(i, j);
                w.row(std::vector<double>{snap.time, snap.rgrid.pos(j), rho * dp});
            }
        }
        w.close();
        man.add_output(out_path(cfg, "marginals.csv"));
    }

    nlohmann::ordered_json dj;
    dj["steps"] = res.diag.steps;
    dj["dt"] = res.diag.dt;
    dj["mass_initial"] = res.diag.mass_initial;
    dj["mass_final"] = res.diag.mass_final;
    dj["min_value"] = res.diag.min_value;
    dj["max_step_change"] = res.diag.max_step_change;
    dj["last_step_change"] = res.diag.last_step_change;
    dj["step_change_history"] = res.diag.step_change_history;
    man.set_diagnostic("solver", dj);

    const double drift = std::fabs(res.diag.mass_final - res.diag.mass_initial);
    man.add_check("mass_conserved", drift < 1e-10, drift, 1e-10);
    man.add_check("positivity", res.diag.min_value >= -1e-12, res.diag.min_value, -1e-12);
    if (cfg.init_temp_factor == 1.0)
        man.add_check("equilibrium_stationary", res.diag.max_step_change < 1e-8,
                      res.diag.max_step_change, 1e-8);
    return finish(cfg, man, timer);
}

int cmd_smoluchowski(const RunConfig& cfg) {
    Timer timer;
    Manifest man("smoluchowski", to_json(cfg), cfg.seed);
    const auto potential = build_potential(cfg);

    // initial density: Boltzmann profile at init_temp_factor * T
    pde::DensityField rho0;
    rho0.grid = cfg.space_grid;
    rho0.rho.resize(cfg.space_grid.points);
    const double beta0 = 1.0 / (cfg.params.T * cfg.init_temp_factor);
    for (std::size_t j = 0; j < cfg.space_grid.points; ++j) {
        const double r = cfg.space_grid.pos(j);
        const double u = langevin::potential_energy(potential, std::span<const double>(&r, 1));
        rho0.rho[j] = std::exp(-beta0 * u);
    }
    // free case: a localized Gaussian that then spreads
    if (std::holds_alternative<langevin::Free>(potential)) {
        const double sigma = cfg.space_grid.length / 16.0;
        for (std::size_t j = 0; j < cfg.space_grid.points; ++j) {
            const double r = cfg.space_grid.pos(j);
            rho0.rho[j] = std::exp(-0.5 * r * r / (sigma * sigma));
        }
    }
    rho0.normalize();

    pde::SmoluchowskiOptions opts;
    opts.dt = cfg.pde_dt;
    opts.save_every = cfg.save_every;
    opts.quantum_correction = cfg.quantum_correction;
    opts.radiation_correction = cfg.radiation_correction;
    const auto res = pde::solve_smoluchowski(rho0, potential, cfg.params, cfg.t_end, opts);

    {
        CsvWriter w(out_path(cfg, "density.csv"));
        w.comment("density rho(r) per saved time");
        const std::vector<std::string> names{"t", "r", "rho"};
        w.header(names);
        for (const auto& snap : res.snapshots)
            for (std::size_t j = 0; j < snap.grid.points; ++j)
                w.row(std::vector<double>{snap.time, snap.grid.pos(j), snap.rho[j]});
        w.close();
        man.add_output(out_path(cfg, "density.csv"));
    }

    nlohmann::ordered_json dj;
    dj["steps"] = res.diag.steps;
    dj["dt"] = res.diag.dt;
    dj["mass_initial"] = res.diag.mass_initial;
    dj["mass_final"] = res.diag.mass_final;
    dj["min_value"] = res.diag.min_value;
    dj["last_step_change"] = res.diag.last_step_change;
    dj["step_change_history"] = res.diag.step_change_history;

    const double drift = std::fabs(res.diag.mass_final - res.diag.mass_initial);
    man.add_check("mass_conserved", drift < 1e-10, drift, 1e-10);
    man.add_check("positivity", res.diag.min_value >= -1e-12, res.diag.min_value, -1e-12);

    if (!std::holds_alternative<langevin::Free>(potential)) {
        // L-infinity distance of the final state from the Boltzmann profile
        const auto& fin = res.snapshots.back();
        std::vector<double> boltz(fin.grid.points);
        double mass = 0.0;
        for (std::size_t j = 0; j < fin.grid.points; ++j) {
            const double r = fin.grid.pos(j);
            const double u =
                langevin::potential_energy(potential, std::span<const double>(&r, 1));
            boltz[j] = std::exp(-cfg.params.beta() * u);
            mass += boltz[j];
        }
        double linf = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < fin.grid.points; ++j) {
            boltz[j] /= mass * fin.grid.spacing();
            linf = std::max(linf, std::fabs(fin.rho[j] - boltz[j]));
            scale = std::max(scale, boltz[j]);
        }
        dj["boltzmann_linf_error"] = linf / scale;
        // the steady-state check applies once the run has actually converged
        const bool converged = res.diag.last_step_change < 1e-9;
        if (converged)
            man.add_check("boltzmann_steady_state_linf", linf / scale < 1e-6, linf / scale, 1e-6);
    }
    man.set_diagnostic("solver", dj);
    return finish(cfg, man, timer);
}

int cmd_constants(const RunConfig& cfg) {
    Timer timer;
    Manifest man("constants", to_json(cfg), cfg.seed);
    const auto table = constants();

    // SI interpretation of m and gamma for the universal-product identity
    BathParams si = cfg.params;
    if (si.m == 1.0) si.m = 9.1093837015e-31; // electron mass default
    const auto td = analysis::universal_TD(si, table);

    CsvWriter w(out_path(cfg, "constants.csv"));
    w.comment("CODATA 2018 / SI-2019 table and the universal T*.D product");
    const std::vector<std::string> names{"T_star_K", "D_m2_per_s", "product",
                                         "reference", "relative_deviation", "tau_s"};
    w.header(names);
    w.row(std::vector<double>{td.T_star, td.D, td.product, td.reference,
                              td.relative_deviation, td.tau});
    w.close();
    man.add_output(out_path(cfg, "constants.csv"));

    nlohmann::ordered_json tj;
    tj["c"] = table.c;
    tj["e"] = table.e;
    tj["eps0"] = table.eps0;
    tj["hbar"] = table.hbar_SI;
    tj["kB"] = table.kB_SI;
    tj["alpha"] = table.alpha;
    man.set_diagnostic("table", tj);

    const double alpha_check =
        std::fabs(table.e * table.e /
                      (4.0 * std::numbers::pi * table.eps0 * table.hbar_SI * table.c) -
                  table.alpha) /
        table.alpha;
    man.add_check("alpha_consistency_1e-9", alpha_check < 1e-9, alpha_check, 1e-9);
    man.add_check("universal_product_1e-10", td.relative_deviation < 1e-10,
                  td.relative_deviation, 1e-10);
    return finish(cfg, man, timer);
}

} // namespace qbd::cli
