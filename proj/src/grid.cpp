#include "pmstab/grid.hpp"

#include <cmath>

#include "pmstab/errors.hpp"

namespace pmstab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
    return 0.5 * (m + m.transpose());
}

// phi[m] operators for the annulus: evaluate the m-th derivative of the
// coarse interpolant on the fine rule.
void build_annulus_part(RadialPart& part, double r_in, double r_out, int n) {
    part.nodes = colloc::lobatto_nodes(n, r_in, r_out);
    const Eigen::VectorXd bary = colloc::lobatto_barycentric_weights(n);
    const Eigen::MatrixXd dx = colloc::lobatto_diff_table(n, r_in, r_out);
    part.d = colloc::differentiation_matrices(part.nodes, bary, 4, &dx);

    const Eigen::VectorXd w = colloc::interval_weights(part.nodes, r_in, r_out);
    part.quad = kTwoPi * w.cwiseProduct(part.nodes);

    const auto fine = colloc::gauss_legendre(2 * n + 8, r_in, r_out);
    part.fine_nodes = fine.nodes;
    part.fine_w = fine.weights;

    const Eigen::MatrixXd resample =
        colloc::resample_matrix(part.nodes, bary, part.fine_nodes);
    part.phi.resize(5);
    part.phi[0] = resample;
    for (int m = 1; m <= 4; ++m)
        part.phi[m] = resample * part.d[m - 1];
}

// Disk: positive half of a symmetric Lobatto grid on [-R, R]. Matrices are
// folded with the parity of the mode; the m-th derivative flips parity m
// times, which matters when extending it back to the full grid for fine
// evaluation.
void build_disk_part(RadialPart& part, double radius, int n, int k) {
    const int nf = 2 * n;
    const Eigen::VectorXd full = colloc::lobatto_nodes(nf, -radius, radius);
    const Eigen::VectorXd bary = colloc::lobatto_barycentric_weights(nf);
    const Eigen::MatrixXd dx = colloc::lobatto_diff_table(nf, -radius, radius);
    const auto dfull = colloc::differentiation_matrices(full, bary, 4, &dx);

    part.nodes = full.head(n);
    const double parity = (k % 2 == 0) ? 1.0 : -1.0;

    auto fold = [&](const Eigen::MatrixXd& dm) {
        Eigen::MatrixXd out(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out(i, j) = dm(i, j) + parity * dm(i, nf - 1 - j);
        return out;
    };
    part.d.resize(4);
    for (int m = 0; m < 4; ++m)
        part.d[m] = fold(dfull[m]);

    const Eigen::VectorXd w = colloc::disk_half_weights(part.nodes, radius);
    part.quad = kTwoPi * w.cwiseProduct(part.nodes);

    const auto fine = colloc::gauss_legendre(2 * n + 8, 0.0, radius);
    part.fine_nodes = fine.nodes;
    part.fine_w = fine.weights;

    const Eigen::MatrixXd resample =
        colloc::resample_matrix(full, bary, part.fine_nodes);
    auto extend = [&](double sign) {
        Eigen::MatrixXd ext = Eigen::MatrixXd::Zero(nf, n);
        for (int j = 0; j < n; ++j) {
            ext(j, j) = 1.0;
            ext(nf - 1 - j, j) = sign;
        }
        return ext;
    };
    part.phi.resize(5);
    part.phi[0] = resample * extend(parity);
    for (int m = 1; m <= 4; ++m) {
        const double dsign = (m % 2 == 0) ? parity : -parity;
        part.phi[m] = resample * extend(dsign) * part.d[m - 1];
    }
}

Eigen::MatrixXd fine_laplacian(const RadialPart& p, int k) {
    const Eigen::ArrayXd r = p.fine_nodes.array();
    return p.phi[2] + (1.0 / r).matrix().asDiagonal() * p.phi[1] -
           double(k) * k * (1.0 / (r * r)).matrix().asDiagonal() * p.phi[0];
}

} // namespace

ModeGrid build_mode_grid(const Geometry& geometry, int k, int n_annulus, int n_disk) {
    geometry.validate();
    if (n_annulus < 8 || n_disk < 8)
        throw ConfigError("n_annulus/n_disk", "need at least 8 radial nodes");

    ModeGrid g;
    g.geom = geometry;
    g.k = k;
    g.n_annulus = n_annulus;
    g.n_disk = n_disk;
    build_annulus_part(g.annulus, geometry.r_in, geometry.r_out, n_annulus);
    build_disk_part(g.disk, geometry.r_in, n_disk, k);

    const double k2 = double(k) * k;

    // Annulus forms.
    {
        const RadialPart& p = g.annulus;
        const Eigen::ArrayXd r = p.fine_nodes.array();
        const Eigen::VectorXd wr = (p.fine_w.array() * r).matrix();
        const Eigen::VectorXd w_over_r = (p.fine_w.array() / r).matrix();

        g.mass_a = kTwoPi * symmetrized(p.phi[0].transpose() * wr.asDiagonal() * p.phi[0]);
        g.grad_a = kTwoPi * symmetrized(p.phi[1].transpose() * wr.asDiagonal() * p.phi[1] +
                                        k2 * p.phi[0].transpose() * w_over_r.asDiagonal() * p.phi[0]);

        const Eigen::MatrixXd lap = fine_laplacian(p, k);
        g.lap_pair_a = kTwoPi * p.phi[0].transpose() * wr.asDiagonal() * lap;
        g.lapsq_form_a = kTwoPi * symmetrized(lap.transpose() * wr.asDiagonal() * lap);

        // Hessian components in the orthonormal polar frame:
        //   H_rr = u'',  H_tt = u'/r - k^2 u / r^2,  |H_rt|^2 = k^2 (u'/r - u/r^2)^2.
        const Eigen::MatrixXd htt =
            (1.0 / r).matrix().asDiagonal() * p.phi[1] -
            k2 * (1.0 / (r * r)).matrix().asDiagonal() * p.phi[0];
        const Eigen::MatrixXd hrt =
            (1.0 / r).matrix().asDiagonal() * p.phi[1] -
            (1.0 / (r * r)).matrix().asDiagonal() * p.phi[0];
        g.hess_form_a = kTwoPi * symmetrized(p.phi[2].transpose() * wr.asDiagonal() * p.phi[2] +
                                             htt.transpose() * wr.asDiagonal() * htt +
                                             2.0 * k2 * hrt.transpose() * wr.asDiagonal() * hrt);
    }

    // Disk forms.
    {
        const RadialPart& p = g.disk;
        const Eigen::ArrayXd r = p.fine_nodes.array();
        const Eigen::VectorXd wr = (p.fine_w.array() * r).matrix();
        const Eigen::VectorXd w_over_r = (p.fine_w.array() / r).matrix();

        g.mass_d = kTwoPi * symmetrized(p.phi[0].transpose() * wr.asDiagonal() * p.phi[0]);
        g.grad_d = kTwoPi * symmetrized(p.phi[1].transpose() * wr.asDiagonal() * p.phi[1] +
                                        k2 * p.phi[0].transpose() * w_over_r.asDiagonal() * p.phi[0]);
        g.lap_pair_d = kTwoPi * p.phi[0].transpose() * wr.asDiagonal() * fine_laplacian(p, k);
    }
    return g;
}

Eigen::MatrixXd laplacian_k(const ModeGrid& grid, Domain domain) {
    const RadialPart& p = (domain == Domain::annulus) ? grid.annulus : grid.disk;
    const Eigen::ArrayXd r = p.nodes.array();
    const double k2 = double(grid.k) * grid.k;
    return p.d[1] + (1.0 / r).matrix().asDiagonal() * p.d[0] -
           k2 * (1.0 / (r * r)).matrix().asDiagonal() *
               Eigen::MatrixXd::Identity(p.nodes.size(), p.nodes.size());
}

Eigen::MatrixXd bilaplacian_k(const ModeGrid& grid) {
    const Eigen::MatrixXd lap = laplacian_k(grid, Domain::annulus);
    return lap * lap;
}

BoundaryRow boundary_rows(const ModeGrid& grid, BoundaryWhich which,
                          const BoundaryCoeffs& coeffs) {
    const int na = grid.n_annulus;
    const int ia = na - 1;           // annulus node at r_in
    const double r_in = grid.geom.r_in;
    const double k2 = double(grid.k) * grid.k;

    auto unit_row = [](int n, int i) {
        Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
        e[i] = 1.0;
        return e;
    };
    auto need_mu = [&]() {
        if (!coeffs.mu) throw UsageError("boundary_rows: plate rows need mu");
        return *coeffs.mu;
    };
    auto need_kappa = [&]() {
        if (!coeffs.kappa) throw UsageError("boundary_rows: Robin rows need kappa");
        return *coeffs.kappa;
    };

    BoundaryRow row;
    switch (which) {
    case BoundaryWhich::dirichlet_gamma:
        row.annulus = unit_row(na, 0);
        break;
    case BoundaryWhich::neumann_gamma:
        row.annulus = grid.annulus.d[0].row(0);
        break;
    case BoundaryWhich::robin_gamma:
        row.annulus = grid.annulus.d[0].row(0) + need_kappa() * unit_row(na, 0);
        break;
    case BoundaryWhich::robin_interface:
        row.annulus = -grid.annulus.d[0].row(ia) + need_kappa() * unit_row(na, ia);
        break;
    case BoundaryWhich::continuity_interface:
        row.annulus = unit_row(na, ia);
        row.disk = -unit_row(grid.n_disk, 0);
        break;
    case BoundaryWhich::b1_interface:
        row.annulus = plate_rows(grid, need_mu(), Circle::interface).b1;
        break;
    case BoundaryWhich::b2_interface:
        row.annulus = plate_rows(grid, need_mu(), Circle::interface).b2;
        break;
    case BoundaryWhich::normal_derivative_interface:
        row.annulus = -grid.annulus.d[0].row(ia);
        row.disk = -grid.disk.d[0].row(0);
        break;
    }
    return row;
}

PlateRows plate_rows(const ModeGrid& grid, double mu, Circle circle) {
    const int na = grid.n_annulus;
    const int i = (circle == Circle::outer) ? 0 : na - 1;
    const double s = (circle == Circle::outer) ? 1.0 : -1.0;
    const double R = (circle == Circle::outer) ? grid.geom.r_out : grid.geom.r_in;
    const double k2 = double(grid.k) * grid.k;

    Eigen::RowVectorXd eval = Eigen::RowVectorXd::Zero(na);
    eval[i] = 1.0;
    const Eigen::RowVectorXd d1 = grid.annulus.d[0].row(i);
    const Eigen::RowVectorXd d2 = grid.annulus.d[1].row(i);
    const Eigen::RowVectorXd d3 = grid.annulus.d[2].row(i);

    PlateRows rows;
    // B1 u = d_nu^2 u + mu d_tau^2 u + mu (div nu) d_nu u. The curvature term
    // (div nu) d_nu = u'/r is independent of the normal's sign.
    rows.b1 = d2 + (mu / R) * d1 - (mu * k2 / (R * R)) * eval;
    // B2 u = d_nu^3 u + d_nu d_tau^2 u + (1-mu) d_tau d_nu d_tau u
    //        + d_nu[(div nu) d_nu u], all radially extended off the circle.
    rows.b2 = s * (d3 + d2 / R - (1.0 + (2.0 - mu) * k2) / (R * R) * d1 +
                   (3.0 - mu) * k2 / (R * R * R) * eval);
    return rows;
}

GcScanResult geometric_condition_scan(const Geometry& geometry,
                                      const Eigen::Vector2d& x0) {
    geometry.validate();
    GcScanResult out;
    const double amp = x0.norm();
    out.min = -geometry.r_in - amp;
    out.max = -geometry.r_in + amp;
    return out;
}

} // namespace pmstab
