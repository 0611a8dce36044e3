// Throwaway probe: high-k abscissa power law and peak-fit cleanliness.
#include <cstdio>
#include <vector>
#include <cmath>

#include "pmstab/operator.hpp"

using namespace pmstab;

int main() {
    Geometry geom;
    PhysicalParams pm;
    pm.m = 0.0;

    std::vector<double> lnf, lnp; // ln(frequency of least-damped), ln(1/|Re|)
    std::printf("k    n=32 abscissa      freq       n=48 abscissa\n");
    for (int k : {4, 8, 16, 24, 32, 48, 64, 96, 128, 160, 190}) {
        ModeGrid g = build_mode_grid(geom, k, 32, 32);
        ModeOperator op = assemble(pm, g);
        Eigen::EigenSolver<Eigen::MatrixXd> es(op.reduced);
        double best_re = -1e300, freq = 0;
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            auto ev = es.eigenvalues()[i];
            if (ev.real() > best_re && ev.imag() > 0) {
                best_re = ev.real();
                freq = ev.imag();
            }
        }
        double re48 = 0;
        {
            ModeGrid g48 = build_mode_grid(geom, k, 48, 48);
            ModeOperator op48 = assemble(pm, g48);
            Eigen::EigenSolver<Eigen::MatrixXd> es48(op48.reduced);
            re48 = es48.eigenvalues().real().maxCoeff();
        }
        std::printf("%3d  %.6e  %8.3f  %.6e\n", k, best_re, freq, re48);
        if (k >= 4 && freq > 0 && best_re < 0) {
            lnf.push_back(std::log(freq));
            lnp.push_back(std::log(-1.0 / best_re));
        }
    }
    // power-law fit of refined peak heights 1/|Re| vs frequency
    int np = lnf.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < np; ++i) { sx += lnf[i]; sy += lnp[i]; sxx += lnf[i]*lnf[i]; sxy += lnf[i]*lnp[i]; }
    double slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
    double icpt = (sy - slope * sx) / np;
    double rss = 0;
    for (int i = 0; i < np; ++i) { double e = lnp[i] - slope * lnf[i] - icpt; rss += e*e; }
    std::printf("peak-height power law: slope %.3f residual %.3f (n=%d)\n",
                slope, std::sqrt(rss / np), np);
    return 0;
}
