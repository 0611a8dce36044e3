// Throwaway probe: trajectories, decay fits, full contrast pipeline timing.
#include <chrono>
#include <cstdio>

#include "pmstab/stability.hpp"

using namespace pmstab;
using Clock = std::chrono::steady_clock;

static double secs(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

int main() {
    setvbuf(stdout, nullptr, _IONBF, 0);
    Geometry geom;
    PhysicalParams pm;

    // Unitary conservation, 1e4 steps.
    {
        auto t0 = Clock::now();
        EvolveOptions opt;
        opt.modes = {0};
        opt.preset = Preset::membrane_bump;
        opt.kind = SystemKind::membrane_dirichlet;
        opt.t_final = 100.0;
        opt.dt = 0.01;
        EnergyTrajectory tr = evolve(pm, geom, opt);
        double e0 = tr.energies.front(), worst = 0;
        for (double e : tr.energies) worst = std::max(worst, std::abs(e - e0) / e0);
        std::printf("unitary: steps %zu, max |E-E0|/E0 = %.3e  (%.1fs)\n",
                    tr.times.size() - 1, worst, secs(t0, Clock::now()));
    }

    // m=1 exponential decay fit over [5, 50]; per-step monotonicity.
    {
        pm.m = 1.0;
        EvolveOptions opt;
        opt.modes = {0, 1, 2, 3};
        opt.preset = Preset::mixed;
        opt.t_final = 50.0;
        opt.dt = 0.01;
        EnergyTrajectory tr = evolve(pm, geom, opt);
        double worst_growth = 0;
        for (size_t i = 1; i < tr.energies.size(); ++i)
            worst_growth = std::max(worst_growth,
                                    tr.energies[i] / tr.energies[i - 1] - 1.0);
        std::vector<double> t, le;
        for (size_t i = 0; i < tr.times.size(); ++i)
            if (tr.times[i] >= 5.0) { t.push_back(tr.times[i]); le.push_back(std::log(tr.energies[i])); }
        // crude exp fit
        double sx=0, sy=0, sxx=0, sxy=0; int n=t.size();
        for (int i = 0; i < n; ++i) { sx+=t[i]; sy+=le[i]; sxx+=t[i]*t[i]; sxy+=t[i]*le[i]; }
        double slope = (n*sxy - sx*sy)/(n*sxx - sx*sx);
        double icpt=(sy-slope*sx)/n, rss=0, syy=0, my=sy/n;
        for (int i = 0; i < n; ++i){double e=le[i]-slope*t[i]-icpt; rss+=e*e; syy+=(le[i]-my)*(le[i]-my);}
        std::printf("m=1 evolve: omega=%.4f R2=%.5f, worst step growth %.2e\n",
                    -slope, 1.0 - rss/syy, worst_growth);
    }

    // Balance order: defect(dt) vs defect(dt/2).
    {
        pm.m = 0.0;
        auto defect = [&](double dt) {
            EvolveOptions opt;
            opt.modes = {0, 2};
            opt.preset = Preset::mixed;
            opt.t_final = 10.0;
            opt.frequency_cutoff = 25.0;
            opt.dt = dt;
            EnergyTrajectory tr = evolve(pm, geom, opt);
            return std::abs(tr.energies.front() - tr.energies.back() -
                            tr.dissipation_integral.back());
        };
        double d1 = defect(0.02), d2 = defect(0.01);
        std::printf("balance defect: %.3e -> %.3e, order %.2f\n", d1, d2,
                    std::log2(d1 / d2));
    }

    // Decay probe m=0 and m=1.
    {
        auto t0 = Clock::now();
        EvolveOptions opt;
        opt.modes = {0, 1, 2, 3, 4, 5, 6, 7, 8};
        opt.preset = Preset::mixed;
        opt.t_final = 200.0;
        opt.dt = 0.005;
        pm.m = 0.0;
        DecayFit f0 = polynomial_decay_probe(pm, geom, opt);
        pm.m = 1.0;
        DecayFit f1 = polynomial_decay_probe(pm, geom, opt);
        std::printf("decay m=0: gamma %.3f (r-hat %.1f) R2alg %.4f R2exp %.4f expbetter %d\n",
                    f0.gamma, f0.r_hat, f0.r2_algebraic, f0.r2_exponential,
                    f0.exponential_better);
        std::printf("decay m=1: gamma %.3f R2alg %.4f R2exp %.4f expbetter %d  (%.1fs both)\n",
                    f1.gamma, f1.r2_algebraic, f1.r2_exponential, f1.exponential_better,
                    secs(t0, Clock::now()));
    }

    // Full contrast pipeline at acceptance scale: k_max=192, n=48.
    for (double m : {0.0, 1.0}) {
        pm.m = m;
        auto t0 = Clock::now();
        std::vector<ModeOperator> ops;
        std::vector<double> absc;
        for (int k = 0; k <= 192; k += 2) {
            ModeGrid g = build_mode_grid(geom, k, 48, 48);
            ops.push_back(assemble(pm, g));
            absc.push_back(spectral_abscissa(ops.back()));
        }
        auto t1 = Clock::now();
        ResolventScan scan = resolvent_scan(ops, 2.0, 200.0, 24);
        auto t2 = Clock::now();
        GrowthFit fit = growth_exponent_fit(scan);
        std::vector<int> ks_list;
        for (int k = 0; k <= 192; k += 2) ks_list.push_back(k);
        StabilityVerdict v = classify(ks_list, absc, fit);
        std::printf("m=%.0f: samples %zu peaks %d slope %.3f resid %.3f verdict %s "
                    "(assemble+eig %.1fs, scan %.1fs)\n",
                    m, scan.lambdas.size(), fit.n_peaks, fit.r_est, fit.residual,
                    to_string(v), secs(t0, t1), secs(t1, t2));
    }
    return 0;
}
