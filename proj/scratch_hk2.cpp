// Throwaway probe: predicted envelope fit over all fundamentals in [2,200].
#include <cstdio>
#include <vector>
#include <cmath>

#include "pmstab/operator.hpp"

using namespace pmstab;

int main() {
    Geometry geom;
    PhysicalParams pm;
    pm.m = 0.0;
    const int n = 48;

    std::vector<double> lnf, lnp;
    for (int k = 0; k <= 195; ++k) {
        ModeGrid g = build_mode_grid(geom, k, n, n);
        ModeOperator op = assemble(pm, g);
        Eigen::EigenSolver<Eigen::MatrixXd> es(op.reduced);
        double best_re = -1e300, freq = 0;
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            auto ev = es.eigenvalues()[i];
            if (ev.imag() > 0 && ev.real() > best_re) {
                best_re = ev.real();
                freq = ev.imag();
            }
        }
        if (freq >= 2.0 && freq <= 200.0 && best_re < 0) {
            lnf.push_back(std::log(freq));
            lnp.push_back(std::log(-1.0 / best_re));
            if (k % 16 == 0)
                std::printf("k=%3d freq %8.3f  Re %.3e\n", k, freq, best_re);
        }
    }
    const int np = static_cast<int>(lnf.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < np; ++i) { sx += lnf[i]; sy += lnp[i]; sxx += lnf[i]*lnf[i]; sxy += lnf[i]*lnp[i]; }
    const double slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / np;
    double rss = 0, maxdev = 0;
    for (int i = 0; i < np; ++i) {
        double e = lnp[i] - slope * lnf[i] - icpt;
        rss += e * e;
        maxdev = std::max(maxdev, std::abs(e));
    }
    std::printf("fundamental-peak fit: %d peaks, slope %.3f, residual %.3f, maxdev %.3f\n",
                np, slope, std::sqrt(rss / np), maxdev);
    return 0;
}
