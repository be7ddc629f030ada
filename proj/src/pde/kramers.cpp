#include "qbd/pde/kramers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qbd/core/csv.hpp"
#include "qbd/pde/resolvent.hpp"
#include "qbd/pde/tridiag.hpp"

namespace qbd::pde {

namespace {

double cc_delta(double w) {
    if (std::fabs(w) < 1e-5) return 0.5 - w / 12.0 + w * w * w / 720.0;
    return 1.0 / w - 1.0 / std::expm1(w);
}

double minmod(double a, double b) {
    if (a > 0.0 && b > 0.0) return std::min(a, b);
    if (a < 0.0 && b < 0.0) return std::max(a, b);
    return 0.0;
}

double potential_at(const langevin::Potential& pot, double r) {
    return langevin::potential_energy(pot, std::span<const double>(&r, 1));
}

/// Geometry, equilibrium weights and scheme coefficients fixed over a run.
struct KramersWorkspace {
    std::size_t nr, np, nfr; // nfr: interior r faces (nr when periodic)
    double dr, dp;
    bool periodic;
    std::vector<double> X;       // exp(-beta p_i^2/2m)
    std::vector<double> Y;       // exp(-beta U_j)
    std::vector<double> psi;     // face values sqrt(Y_j Y_{j+1}) (+ ghosts for coeffs)
    std::vector<double> xt;      // face values sqrt(X_i X_{i+1})
    std::vector<double> vel_r;   // p_tilde_i / m
    std::vector<double> vel_p;   // -U_tilde'_j
    std::vector<double> cc_a, cc_b; // dissipative flux J/gamma = a f_i + b f_{i+1}
};

KramersWorkspace make_workspace(const PhaseSpaceField& f0, const langevin::Potential& pot,
                                const BathParams& par) {
    KramersWorkspace w;
    w.nr = f0.nr();
    w.np = f0.np;
    w.dr = f0.rgrid.spacing();
    w.dp = f0.dp();
    w.periodic = f0.rgrid.periodic;
    w.nfr = w.periodic ? w.nr : w.nr - 1;
    const double beta = par.beta();

    std::vector<double> U(w.nr);
    for (std::size_t j = 0; j < w.nr; ++j) U[j] = potential_at(pot, f0.rgrid.pos(j));
    w.Y.resize(w.nr);
    for (std::size_t j = 0; j < w.nr; ++j) w.Y[j] = std::exp(-beta * U[j]);
    w.X.resize(w.np);
    for (std::size_t i = 0; i < w.np; ++i) {
        const double p = f0.p(i);
        w.X[i] = std::exp(-beta * p * p / (2.0 * par.m));
    }

    // interior faces
    w.psi.resize(w.nfr);
    for (std::size_t j = 0; j < w.nfr; ++j) {
        const std::size_t jp = (j + 1) % w.nr;
        w.psi[j] = std::exp(-0.5 * beta * (U[j] + U[jp]));
    }
    w.xt.resize(w.np - 1);
    for (std::size_t i = 0; i + 1 < w.np; ++i) {
        const double pi = f0.p(i), pi1 = f0.p(i + 1);
        w.xt[i] = std::exp(-beta * (pi * pi + pi1 * pi1) / (4.0 * par.m));
    }

    // Advection coefficients as discrete log-derivatives of the equilibrium
    // weights; ghost faces from the analytic formulas so the definition is
    // uniform up to the walls.
    auto xt_at = [&](double pa, double pb) {
        return std::exp(-beta * (pa * pa + pb * pb) / (4.0 * par.m));
    };
    w.vel_r.resize(w.np);
    for (std::size_t i = 0; i < w.np; ++i) {
        const double p = f0.p(i);
        const double hi = xt_at(p, p + w.dp);
        const double lo = xt_at(p - w.dp, p);
        const double p_tilde = -(par.m / beta) * (hi - lo) / (w.dp * w.X[i]);
        w.vel_r[i] = p_tilde / par.m;
    }
    auto psi_at = [&](double ra, double rb) {
        return std::exp(-0.5 * beta * (potential_at(pot, ra) + potential_at(pot, rb)));
    };
    w.vel_p.resize(w.nr);
    for (std::size_t j = 0; j < w.nr; ++j) {
        const double r = f0.rgrid.pos(j);
        double hi, lo;
        if (w.periodic) {
            hi = w.psi[j];
            lo = w.psi[(j + w.nfr - 1) % w.nfr];
        } else {
            hi = (j + 1 < w.nr) ? w.psi[j] : psi_at(r, r + w.dr);
            lo = (j > 0) ? w.psi[j - 1] : psi_at(r - w.dr, r);
        }
        const double u_tilde = -(1.0 / beta) * (hi - lo) / (w.dr * w.Y[j]);
        w.vel_p[j] = -u_tilde;
    }

    // Chang-Cooper coefficients for J/gamma = p f + mT df/dp on p faces
    w.cc_a.resize(w.np - 1);
    w.cc_b.resize(w.np - 1);
    for (std::size_t i = 0; i + 1 < w.np; ++i) {
        const double ph = 0.5 * (f0.p(i) + f0.p(i + 1));
        const double wexp = beta * ph * w.dp / par.m;
        const double delta = cc_delta(wexp);
        w.cc_a[i] = ph * delta - par.m * par.T / w.dp;
        w.cc_b[i] = ph * (1.0 - delta) + par.m * par.T / w.dp;
    }
    return w;
}

/// Advective right-hand side: minus the divergence of the equilibrium-
/// weighted MUSCL fluxes of h = f/(X*Y).
void advection_rhs(const KramersWorkspace& w, const std::vector<double>& f,
                   std::vector<double>& h, std::vector<double>& rhs) {
    const std::size_t nr = w.nr, np = w.np;
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < nr; ++j)
            h[i * nr + j] = f[i * nr + j] / (w.X[i] * w.Y[j]);
    std::fill(rhs.begin(), rhs.end(), 0.0);

    // r-direction sweep
    std::vector<double> flux(w.nfr);
    for (std::size_t i = 0; i < np; ++i) {
        const double v = w.vel_r[i];
        const double coeff = v * w.X[i];
        const double* hr = &h[i * nr];
        auto hval = [&](long jj) -> double {
            if (w.periodic) {
                const long m = static_cast<long>(nr);
                return hr[((jj % m) + m) % m];
            }
            jj = std::clamp<long>(jj, 0, static_cast<long>(nr) - 1);
            return hr[jj];
        };
        for (std::size_t jf = 0; jf < w.nfr; ++jf) {
            const long j = static_cast<long>(jf);
            double hface;
            if (v >= 0.0) {
                const double slope = minmod(hval(j) - hval(j - 1), hval(j + 1) - hval(j));
                hface = hval(j) + 0.5 * slope;
            } else {
                const double slope = minmod(hval(j + 1) - hval(j), hval(j + 2) - hval(j + 1));
                hface = hval(j + 1) - 0.5 * slope;
            }
            flux[jf] = coeff * w.psi[jf] * hface;
        }
        for (std::size_t j = 0; j < nr; ++j) {
            const double up = (w.periodic || j + 1 < nr) ? flux[j % w.nfr] : 0.0;
            const double lo = w.periodic ? flux[(j + w.nfr - 1) % w.nfr]
                                         : (j > 0 ? flux[j - 1] : 0.0);
            rhs[i * nr + j] -= (up - lo) / w.dr;
        }
    }

    // p-direction sweep
    std::vector<double> fluxp(np - 1);
    for (std::size_t j = 0; j < nr; ++j) {
        const double v = w.vel_p[j];
        const double coeff = v * w.Y[j];
        auto hval = [&](long ii) -> double {
            ii = std::clamp<long>(ii, 0, static_cast<long>(np) - 1);
            return h[static_cast<std::size_t>(ii) * nr + j];
        };
        for (std::size_t fi = 0; fi + 1 < np; ++fi) {
            const long i = static_cast<long>(fi);
            double hface;
            if (v >= 0.0) {
                const double slope = minmod(hval(i) - hval(i - 1), hval(i + 1) - hval(i));
                hface = hval(i) + 0.5 * slope;
            } else {
                const double slope = minmod(hval(i + 1) - hval(i), hval(i + 2) - hval(i + 1));
                hface = hval(i + 1) - 0.5 * slope;
            }
            fluxp[fi] = coeff * w.xt[fi] * hface;
        }
        for (std::size_t i = 0; i < np; ++i) {
            const double up = (i + 1 < np) ? fluxp[i] : 0.0;
            const double lo = (i > 0) ? fluxp[i - 1] : 0.0;
            rhs[i * nr + j] -= (up - lo) / w.dp;
        }
    }
}

/// Chang-Cooper face fluxes J/gamma = p f + mT df/dp; layout [face i][j].
void cc_face_flux(const KramersWorkspace& w, const std::vector<double>& f,
                  std::vector<double>& faces) {
    const std::size_t nr = w.nr, np = w.np;
    faces.resize((np - 1) * nr);
    for (std::size_t i = 0; i + 1 < np; ++i)
        for (std::size_t j = 0; j < nr; ++j)
            faces[i * nr + j] = w.cc_a[i] * f[i * nr + j] + w.cc_b[i] * f[(i + 1) * nr + j];
}

} // namespace

PhaseSpaceField maxwell_boltzmann(const SpaceGrid& rgrid, std::size_t np, double p_max,
                                  const langevin::Potential& potential,
                                  const BathParams& params) {
    PhaseSpaceField f;
    f.rgrid = rgrid;
    f.np = np;
    f.p_max = p_max;
    f.f.assign(np * rgrid.points, 0.0);
    const double beta = params.beta();
    for (std::size_t i = 0; i < np; ++i) {
        const double p = f.p(i);
        const double xp = std::exp(-beta * p * p / (2.0 * params.m));
        for (std::size_t j = 0; j < rgrid.points; ++j) {
            const double u = potential_at(potential, rgrid.pos(j));
            f.at(i, j) = xp * std::exp(-beta * u);
        }
    }
    f.normalize();
    return f;
}

KramersResult solve_kramers(const PhaseSpaceField& f0, const langevin::Potential& potential,
                            const BathParams& params, double t_end,
                            const KramersOptions& opts) {
    f0.validate();
    params.validate();
    if (!(t_end > 0.0)) throw std::invalid_argument("solve_kramers: t_end must be > 0");
    const double p_thermal = std::sqrt(params.m * params.T);
    if (f0.p_max < 6.0 * p_thermal)
        throw std::invalid_argument("solve_kramers: p_max must be >= 6*sqrt(m*T)");

    KramersWorkspace w = make_workspace(f0, potential, params);

    double vmax_r = 0.0, vmax_p = 0.0;
    for (double v : w.vel_r) vmax_r = std::max(vmax_r, std::fabs(v));
    for (double v : w.vel_p) vmax_p = std::max(vmax_p, std::fabs(v));
    const double adv_rate = vmax_r / w.dr + vmax_p / w.dp;
    const double dt_cfl = (adv_rate > 0.0) ? opts.cfl / adv_rate : 0.1 / params.gamma;

    double dt = opts.dt;
    if (dt <= 0.0) {
        dt = std::min(dt_cfl, 0.1 / params.gamma);
    } else if (dt > dt_cfl) {
        throw std::invalid_argument("solve_kramers: advective CFL bound violated; need dt <= " +
                                    format_double(dt_cfl));
    }
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt));
    dt = t_end / static_cast<double>(steps);

    KramersResult out;
    out.diag.dt = dt;
    out.diag.steps = steps;
    out.diag.mass_initial = f0.mass();

    const std::size_t ncell = w.np * w.nr;
    std::vector<double> f = f0.f;
    std::vector<double> h(ncell), rhs(ncell), stage(ncell), stage2(ncell);
    std::vector<double> src(ncell), w1(ncell), w2(ncell);
    std::vector<double> cflux, base_faces, corr_faces;

    const double cq =
        params.m * params.T * params.beta() * params.beta() * params.hbar * params.hbar / 12.0;
    const double cgam = dt * params.gamma / w.dp;

    // Chang-Cooper implicit rows are column-independent; assemble once.
    std::vector<double> lo(w.np), di(w.np), up(w.np);
    for (std::size_t i = 0; i < w.np; ++i) {
        double dd = 1.0;
        double dl = 0.0, du = 0.0;
        if (i + 1 < w.np) {
            dd -= cgam * w.cc_a[i];
            du = -cgam * w.cc_b[i];
        }
        if (i > 0) {
            dd += cgam * w.cc_b[i - 1];
            dl = cgam * w.cc_a[i - 1];
        }
        lo[i] = dl;
        di[i] = dd;
        up[i] = du;
    }

    auto snapshot = [&](double time) {
        PhaseSpaceField s = f0;
        s.f = f;
        s.time = time;
        out.snapshots.push_back(std::move(s));
    };
    snapshot(f0.time);

    std::vector<double> col_d(w.np), col_r(w.np), col_x(w.np), col_l(w.np), col_u(w.np);

    // full generator A(f) = advection + gamma * div_p J'(f), used to
    // order-reduce the d2/dt2 in the correction terms
    auto apply_generator = [&](const std::vector<double>& in, std::vector<double>& out_rhs) {
        advection_rhs(w, in, h, out_rhs);
        cc_face_flux(w, in, base_faces);
        for (std::size_t j = 0; j < w.nr; ++j) {
            double flux_lo = 0.0;
            for (std::size_t i = 0; i < w.np; ++i) {
                const double flux_hi = (i + 1 < w.np) ? base_faces[i * w.nr + j] : 0.0;
                out_rhs[i * w.nr + j] += params.gamma * (flux_hi - flux_lo) / w.dp;
                flux_lo = flux_hi;
            }
        }
    };

    const bool corrections = (opts.quantum_correction && params.hbar > 0.0) ||
                             (opts.radiation_correction && params.tau > 0.0);
    // shared resummed d2/dt2 resolvent, acting in p per column; the scale
    // matches the p-diffusion rate gamma*m*T*kappa^2 entering the corrections
    const double gmT = params.gamma * params.m * params.T;
    const double c_resolve = gmT * gmT * ((opts.quantum_correction
                                               ? params.beta() * params.beta() * params.hbar *
                                                     params.hbar / 12.0
                                               : 0.0) +
                                          (opts.radiation_correction
                                               ? params.tau / params.gamma
                                               : 0.0));
    const BiharmonicResolvent resolvent(w.np, corrections ? c_resolve : 0.0, w.dp, false);

    for (std::size_t step = 0; step < steps; ++step) {
        // --- advection substep (SSP-RK2 on the limited fluxes) ---
        advection_rhs(w, f, h, rhs);
        for (std::size_t k = 0; k < ncell; ++k) stage[k] = f[k] + dt * rhs[k];
        advection_rhs(w, stage, h, rhs);
        for (std::size_t k = 0; k < ncell; ++k)
            stage2[k] = 0.5 * (f[k] + stage[k] + dt * rhs[k]);

        // --- correction sources, order-reduced (d2f/dt2 ~ A(A(f)), resummed
        // in p) and assembled as p-face fluxes: mass-conserving, validity-
        // clipped against the dissipative baseline flux and positivity-
        // limited against the donor cell ---
        std::fill(src.begin(), src.end(), 0.0);
        if (corrections) {
            apply_generator(f, w1);
            apply_generator(w1, w2);
            // resum each r-column in the p direction
            std::vector<double> col(w.np);
            for (std::size_t j = 0; j < w.nr; ++j) {
                for (std::size_t i = 0; i < w.np; ++i) col[i] = w2[i * w.nr + j];
                const auto z = resolvent.solve(col);
                for (std::size_t i = 0; i < w.np; ++i) w2[i * w.nr + j] = z[i];
            }
            cflux.assign((w.np - 1) * w.nr, 0.0);
            if (opts.quantum_correction) {
                for (std::size_t i = 0; i + 1 < w.np; ++i)
                    for (std::size_t j = 0; j < w.nr; ++j)
                        cflux[i * w.nr + j] -= params.gamma * cq *
                                               (w2[(i + 1) * w.nr + j] - w2[i * w.nr + j]) / w.dp;
            }
            if (opts.radiation_correction && params.tau > 0.0) {
                cc_face_flux(w, w2, corr_faces);
                for (std::size_t k = 0; k < cflux.size(); ++k)
                    cflux[k] -= params.tau * corr_faces[k];
            }
            cc_face_flux(w, f, base_faces);
            const double cdt = dt / w.dp;
            for (std::size_t i = 0; i + 1 < w.np; ++i) {
                for (std::size_t j = 0; j < w.nr; ++j) {
                    double& J = cflux[i * w.nr + j];
                    const double vcap = 0.5 * params.gamma * std::fabs(base_faces[i * w.nr + j]);
                    J = std::clamp(J, -vcap, vcap);
                    const double donor =
                        (J > 0.0) ? stage2[(i + 1) * w.nr + j] : stage2[i * w.nr + j];
                    const double pcap = 0.25 * std::max(0.0, donor) / cdt;
                    J = std::clamp(J, -pcap, pcap);
                }
            }
            for (std::size_t j = 0; j < w.nr; ++j) {
                double flux_lo = 0.0;
                for (std::size_t i = 0; i < w.np; ++i) {
                    const double flux_hi = (i + 1 < w.np) ? cflux[i * w.nr + j] : 0.0;
                    src[i * w.nr + j] = (flux_hi - flux_lo) / w.dp;
                    flux_lo = flux_hi;
                }
            }
        }

        // --- dissipative substep: implicit Chang-Cooper per column ---
        for (std::size_t j = 0; j < w.nr; ++j) {
            for (std::size_t i = 0; i < w.np; ++i) {
                col_l[i] = lo[i];
                col_d[i] = di[i];
                col_u[i] = up[i];
                col_r[i] = stage2[i * w.nr + j] + dt * src[i * w.nr + j];
            }
            thomas(col_l, col_d, col_u, col_r, col_x);
            for (std::size_t i = 0; i < w.np; ++i) stage2[i * w.nr + j] = col_x[i];
        }

        // --- commit and diagnostics ---
        double step_change = 0.0, minv = 0.0;
        for (std::size_t k = 0; k < ncell; ++k) {
            step_change = std::max(step_change, std::fabs(stage2[k] - f[k]));
            minv = std::min(minv, stage2[k]);
        }
        out.diag.max_step_change = std::max(out.diag.max_step_change, step_change);
        out.diag.last_step_change = step_change;
        out.diag.min_value = std::min(out.diag.min_value, minv);
        if (minv < -1e-12)
            throw std::runtime_error("solve_kramers: positivity lost at t = " +
                                     format_double(f0.time + (static_cast<double>(step) + 1) * dt));
        f.swap(stage2);

        const double t_now = f0.time + (static_cast<double>(step) + 1) * dt;
        if ((opts.save_every > 0 &&
             (step + 1) % static_cast<std::size_t>(opts.save_every) == 0) ||
            step + 1 == steps) {
            snapshot(t_now);
            out.diag.step_change_history.push_back(step_change);
        }
    }

    PhaseSpaceField fin = f0;
    fin.f = f;
    out.diag.mass_final = fin.mass();
    return out;
}

} // namespace qbd::pde
