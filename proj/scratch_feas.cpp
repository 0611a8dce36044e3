// Throwaway feasibility probe for acceptance-critical quantities.
#include <algorithm>
#include <cstdio>
#include <vector>

#include "pmstab/operator.hpp"

using namespace pmstab;

static double resolvent_norm(const Eigen::MatrixXd& a, std::complex<double> lam) {
    const int n = a.rows();
    Eigen::MatrixXcd m = lam * Eigen::MatrixXcd::Identity(n, n) - a;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return 1.0 / svd.singularValues().minCoeff();
}

int main(int argc, char** argv) {
    Geometry geom;
    PhysicalParams pm;
    const int kmax = 24, n = 32;

    std::vector<Eigen::MatrixXd> red0, red1;
    for (int k = 0; k <= kmax; ++k) {
        ModeGrid g = build_mode_grid(geom, k, n, n);
        pm.m = 0.0;
        red0.push_back(assemble(pm, g).reduced);
        pm.m = 1.0;
        red1.push_back(assemble(pm, g).reduced);
    }

    // Abscissa profiles.
    for (int pass = 0; pass < 2; ++pass) {
        const auto& reds = pass == 0 ? red0 : red1;
        std::printf("m=%d abscissa: ", pass);
        for (int k = 0; k <= kmax; ++k) {
            Eigen::EigenSolver<Eigen::MatrixXd> es(reds[k]);
            std::printf("%.3e ", es.eigenvalues().real().maxCoeff());
        }
        std::printf("\n");
    }

    // Hille-Yosida bound at right-half-plane points (worst violation).
    {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> ur(0.1, 10.0), ui(-20.0, 20.0);
        double worst = -1e300;
        for (int t = 0; t < 12; ++t) {
            std::complex<double> lam(ur(rng), ui(rng));
            for (int k : {0, 7, 24}) {
                double bound = 1.0 / lam.real();
                double val0 = resolvent_norm(red0[k], lam);
                double val1 = resolvent_norm(red1[k], lam);
                worst = std::max({worst, val0 - bound, val1 - bound});
            }
        }
        std::printf("Hille-Yosida worst excess: %.3e\n", worst);
    }

    // Resolvent at the pinned imaginary points; sigma_min of reduced.
    {
        double worst_sv = 1e300;
        for (int k = 0; k <= kmax; ++k) {
            Eigen::BDCSVD<Eigen::MatrixXd> svd(red0[k]);
            worst_sv = std::min(worst_sv, svd.singularValues().minCoeff());
        }
        std::printf("m=0 min sigma_min(A_red) over modes: %.3e\n", worst_sv);
        for (double y : {0.0, 0.5, 5.0, 50.0}) {
            double mx = 0;
            for (int k = 0; k <= kmax; ++k)
                mx = std::max(mx, resolvent_norm(red0[k], {0.0, y}));
            std::printf("  m=0 ||(i%.1f - A)^-1|| max over modes = %.4e\n", y, mx);
        }
    }

    // Resolvent envelope over [2, 200], 24 pts/decade, m=0 and m=1.
    for (int pass = 0; pass < 2; ++pass) {
        const auto& reds = pass == 0 ? red0 : red1;
        const double lmin = 2.0, lmax = 200.0;
        const int ppd = 12;
        const int npts = static_cast<int>(std::log10(lmax / lmin) * ppd) + 1;
        std::vector<double> ls, ns;
        for (int i = 0; i < npts; ++i) {
            double lam = lmin * std::pow(10.0, i / double(ppd));
            double mx = 0;
            for (int k = 0; k <= kmax; ++k)
                mx = std::max(mx, resolvent_norm(reds[k], {0.0, lam}));
            ls.push_back(lam);
            ns.push_back(mx);
        }
        // local maxima
        std::vector<int> peaks;
        for (int i = 1; i + 1 < npts; ++i)
            if (ns[i] > ns[i - 1] && ns[i] > ns[i + 1]) peaks.push_back(i);
        // LS fit log-log on peaks (or all points if < 3 peaks)
        std::vector<double> xs, ys;
        if (peaks.size() >= 3)
            for (int i : peaks) { xs.push_back(std::log(ls[i])); ys.push_back(std::log(ns[i])); }
        else
            for (int i = 0; i < npts; ++i) { xs.push_back(std::log(ls[i])); ys.push_back(std::log(ns[i])); }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int np = xs.size();
        for (int i = 0; i < np; ++i) { sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i]; }
        double slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
        double icpt = (sy - slope * sx) / np;
        double rss = 0;
        for (int i = 0; i < np; ++i) { double e = ys[i] - slope * xs[i] - icpt; rss += e * e; }
        double resid = std::sqrt(rss / np);
        std::printf("m=%d envelope: %zu peaks, slope %.3f, residual %.3f\n", pass,
                    peaks.size(), peaks.size(), slope, resid);
        if (argc > 1) {
            std::printf("  scan m=%d:\n", pass);
            for (int i = 0; i < npts; ++i) std::printf("   %8.3f  %.4e\n", ls[i], ns[i]);
        }
    }
    return 0;
}
