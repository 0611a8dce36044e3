// Throwaway accuracy probe for the collocation core (deleted before finish).
#include <cmath>
#include <cstdio>

#include "pmstab/grid.hpp"

using namespace pmstab;

int main() {
    Geometry geom;
    // d-matrix exactness on polynomials and e^r accuracy sweep.
    for (int n : {16, 24, 32, 48, 64}) {
        ModeGrid g = build_mode_grid(geom, 0, n, n);
        const auto& r = g.annulus.nodes;
        Eigen::VectorXd f(n), d1e(n), d4e(n);
        for (int i = 0; i < n; ++i) {
            f[i] = std::exp(r[i]);
            d1e[i] = std::exp(r[i]);
            d4e[i] = std::exp(r[i]);
        }
        double e1 = (g.annulus.d[0] * f - d1e).cwiseAbs().maxCoeff();
        double e4 = (g.annulus.d[3] * f - d4e).cwiseAbs().maxCoeff();
        // polynomial r^7 exactness for d4: (r^7)'''' = 840 r^3
        Eigen::VectorXd p(n), p4(n);
        for (int i = 0; i < n; ++i) { p[i] = std::pow(r[i], 7); p4[i] = 840.0 * std::pow(r[i], 3); }
        double ep4 = (g.annulus.d[3] * p - p4).cwiseAbs().maxCoeff();
        std::printf("n=%2d  d1(e^r) %.3e  d4(e^r) %.3e  d4(r^7) %.3e\n", n, e1, e4, ep4);
    }
    // quadrature: area of annulus, disk
    {
        ModeGrid g = build_mode_grid(geom, 0, 32, 32);
        double area_a = g.annulus.quad.sum();
        double area_d = g.disk.quad.sum();
        std::printf("annulus area err %.3e  disk area err %.3e\n",
                    std::abs(area_a - M_PI * (4.0 - 1.0)), std::abs(area_d - M_PI));
        // disk laplacian on r^3 with k=3 (harmonic)
        ModeGrid g3 = build_mode_grid(geom, 3, 32, 32);
        Eigen::MatrixXd lap = laplacian_k(g3, Domain::disk);
        Eigen::VectorXd f(32), res;
        for (int i = 0; i < 32; ++i) f[i] = std::pow(g3.disk.nodes[i], 3);
        res = lap * f;
        std::printf("disk k=3 lap(r^3) residual %.3e\n", res.cwiseAbs().maxCoeff());
        // bilaplacian: k=0 on r^4 -> 64
        Eigen::MatrixXd b = bilaplacian_k(g);
        Eigen::VectorXd f4(32);
        for (int i = 0; i < 32; ++i) f4[i] = std::pow(g.annulus.nodes[i], 4);
        Eigen::VectorXd r64 = b * f4;
        std::printf("bilap(r^4)-64 max err %.3e\n", (r64.array() - 64.0).abs().maxCoeff());
        // B1 example: k=0, u=r^2, mu=0.3, r_in=1 -> 2.6
        BoundaryRow row = boundary_rows(g, BoundaryWhich::b1_interface, {.mu = 0.3});
        Eigen::VectorXd u2(32);
        for (int i = 0; i < 32; ++i) u2[i] = g.annulus.nodes[i] * g.annulus.nodes[i];
        std::printf("B1(r^2) at interface = %.12f (expect 2.6)\n", row.annulus.dot(u2));
        // mass exactness: integral of 1 over annulus via mass form
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(32);
        std::printf("mass_a(1,1) err %.3e\n", std::abs(ones.dot(g.mass_a * ones) - 3.0 * M_PI));
        // fine-grid Green check (k=2): (lap u, v) + (grad u, grad v) - boundary = 0 for random data
        ModeGrid g2 = build_mode_grid(geom, 2, 32, 32);
        Eigen::VectorXd u = Eigen::VectorXd::Random(32), v = Eigen::VectorXd::Random(32);
        double lhs = v.dot(g2.lap_pair_a * u);
        double grad = v.dot(g2.grad_a * u);
        // boundary: 2*pi*[r u' v]_{r_in}^{r_out}
        double bt = 2 * M_PI * (2.0 * (g2.annulus.d[0].row(0) * u)(0) * v[0] -
                                1.0 * (g2.annulus.d[0].row(31) * u)(0) * v[31]);
        std::printf("annulus Green defect (rough data) %.3e\n", std::abs(lhs + grad - bt));
        // disk Green: (lap u, v) + (grad u, grad v) - 2*pi*r_in*u'(r_in)v(r_in) = 0
        double dl = v.dot(g2.lap_pair_d * u);
        double dg = v.dot(g2.grad_d * u);
        double dbt = 2 * M_PI * 1.0 * (g2.disk.d[0].row(0) * u)(0) * v[0];
        std::printf("disk Green defect (rough data) %.3e\n", std::abs(dl + dg - dbt));
    }
    return 0;
}
