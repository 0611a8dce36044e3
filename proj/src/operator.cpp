#include "pmstab/operator.hpp"

#include <cmath>

#include "pmstab/colloc.hpp"
#include "pmstab/errors.hpp"

namespace pmstab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Rank-one boundary pairing 2*pi*R * (test row)^T (trial row).
Eigen::MatrixXd circle_pair(double radius, const Eigen::RowVectorXd& test_row,
                            const Eigen::RowVectorXd& trial_row) {
    return kTwoPi * radius * test_row.transpose() * trial_row;
}

Eigen::RowVectorXd unit_row(int n, int i) {
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
    e[i] = 1.0;
    return e;
}

ConstraintRows full_constraints(const PhysicalParams& p, const ModeGrid& g,
                                const BlockLayout& lay) {
    const int na = lay.n_annulus, nd = lay.n_disk, n = lay.total();
    const int ia = na - 1; // annulus interface node
    ConstraintRows cs;
    cs.rows = Eigen::MatrixXd::Zero(10, n);
    auto put = [&](int row, int block, const Eigen::RowVectorXd& r) {
        cs.rows.block(row, lay.offset(block), 1, lay.size(block)) += r;
    };

    const Eigen::RowVectorXd eval_out = unit_row(na, 0);
    const Eigen::RowVectorXd eval_in = unit_row(na, ia);
    const Eigen::RowVectorXd d1_out = g.annulus.d[0].row(0);
    const Eigen::RowVectorXd d1_in = g.annulus.d[0].row(ia);
    const PlateRows plate = plate_rows(g, p.mu, Circle::interface);

    put(0, 1, eval_out);
    cs.names.push_back("w1 = 0 on outer circle");
    put(1, 1, d1_out);
    cs.names.push_back("dnu w1 = 0 on outer circle");
    put(2, 2, eval_out);
    cs.names.push_back("w2 = 0 on outer circle");
    put(3, 2, d1_out);
    cs.names.push_back("dnu w2 = 0 on outer circle");
    put(4, 5, d1_out + p.kappa * eval_out);
    cs.names.push_back("Robin w5 on outer circle");

    put(5, 1, eval_in);
    put(5, 3, -unit_row(nd, 0));
    cs.names.push_back("w1 = w3 on interface");
    put(6, 2, eval_in);
    put(6, 4, -unit_row(nd, 0));
    cs.names.push_back("w2 = w4 on interface");

    put(7, 1, p.beta1 * plate.b1);
    put(7, 5, p.alpha * eval_in);
    cs.names.push_back("beta1 B1 w1 + alpha w5 = 0 on interface");

    put(8, 1, p.beta1 * plate.b2);
    put(8, 5, -p.alpha * d1_in);
    put(8, 3, -p.beta2 * g.disk.d[0].row(0));
    put(8, 4, -p.m * g.disk.d[0].row(0));
    cs.names.push_back("beta1 B2 w1 + alpha dnu w5 + beta2 dnu w3 + m dnu w4 = 0 on interface");

    put(9, 5, -d1_in + p.kappa * eval_in);
    cs.names.push_back("Robin w5 on interface");
    return cs;
}

ConstraintRows membrane_dirichlet_constraints(const BlockLayout& lay) {
    const int na = lay.n_annulus, nd = lay.n_disk, n = lay.total();
    ConstraintRows cs;
    cs.rows = Eigen::MatrixXd::Zero(3 * na + 2, n);
    int r = 0;
    for (int b : {1, 2, 5})
        for (int i = 0; i < na; ++i)
            cs.rows(r++, lay.offset(b) + i) = 1.0;
    cs.rows(r++, lay.offset(3)) = 1.0; // w3 = 0 at interface (disk node 0)
    cs.rows(r++, lay.offset(4)) = 1.0; // w4 = 0 at interface
    cs.names.assign(1, "membrane Dirichlet block constraints");
    return cs;
}

} // namespace

int BlockLayout::offset(int block) const {
    switch (block) {
    case 1: return 0;
    case 2: return n_annulus;
    case 3: return 2 * n_annulus;
    case 4: return 2 * n_annulus + n_disk;
    case 5: return 2 * n_annulus + 2 * n_disk;
    }
    throw UsageError("BlockLayout: block index must be 1..5");
}

int BlockLayout::size(int block) const {
    return (block == 3 || block == 4) ? n_disk : n_annulus;
}

ConstraintRows constraint_rows(const PhysicalParams& params, const ModeGrid& grid,
                               SystemKind kind) {
    const BlockLayout lay{grid.n_annulus, grid.n_disk};
    return (kind == SystemKind::full) ? full_constraints(params, grid, lay)
                                      : membrane_dirichlet_constraints(lay);
}

StateVector StateVector::zero(const BlockLayout& layout) {
    StateVector w;
    w.layout = layout;
    w.data = Eigen::VectorXcd::Zero(layout.total());
    return w;
}

Eigen::VectorXcd ModeOperator::reduce(const StateVector& w) const {
    if (!(w.layout == layout)) throw UsageError("reduce: layout mismatch");
    return basis.transpose() * (gram * w.data);
}

StateVector ModeOperator::lift(const Eigen::VectorXcd& x) const {
    StateVector w;
    w.layout = layout;
    w.data = basis * x;
    return w;
}

StateVector ModeOperator::project(const StateVector& w) const {
    return lift(reduce(w));
}

ModeOperator assemble(const PhysicalParams& params, const ModeGrid& grid,
                      SystemKind kind) {
    params.validate();
    const std::string ctx = "assemble(k=" + std::to_string(grid.k) + ")";

    ModeOperator op;
    op.k = grid.k;
    op.kind = kind;
    op.params = params;
    op.geom = grid.geom;
    op.layout = BlockLayout{grid.n_annulus, grid.n_disk};
    const BlockLayout& lay = op.layout;
    const int n = lay.total();
    const int na = lay.n_annulus, nd = lay.n_disk;

    const Eigen::MatrixXd lap_a = laplacian_k(grid, Domain::annulus);
    const Eigen::MatrixXd lap_d = laplacian_k(grid, Domain::disk);
    const Eigen::MatrixXd bilap = bilaplacian_k(grid);

    // Raw collocation generator.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    auto blk = [&](int bi, int bj) {
        return a.block(lay.offset(bi), lay.offset(bj), lay.size(bi), lay.size(bj));
    };
    blk(1, 2) = Eigen::MatrixXd::Identity(na, na);
    blk(2, 1) = -(params.beta1 / params.rho1) * bilap;
    blk(2, 5) = -(params.alpha / params.rho1) * lap_a;
    blk(3, 4) = Eigen::MatrixXd::Identity(nd, nd);
    blk(4, 3) = (params.beta2 / params.rho2) * lap_d;
    blk(4, 4) = (params.m / params.rho2) * lap_d;
    blk(5, 2) = (params.alpha / params.rho0) * lap_a;
    blk(5, 5) = (params.beta / params.rho0) * lap_a -
                (params.sigma / params.rho0) * Eigen::MatrixXd::Identity(na, na);
    op.generator = std::move(a);

    // Energy inner product.
    const Eigen::MatrixXd h2_form =
        params.mu * grid.lapsq_form_a + (1.0 - params.mu) * grid.hess_form_a;
    Eigen::MatrixXd gmat = Eigen::MatrixXd::Zero(n, n);
    auto gblk = [&](int b) {
        return gmat.block(lay.offset(b), lay.offset(b), lay.size(b), lay.size(b));
    };
    gblk(1) = params.beta1 * h2_form;
    gblk(2) = params.rho1 * grid.mass_a;
    gblk(3) = params.beta2 * grid.grad_d;
    gblk(4) = params.rho2 * grid.mass_d;
    gblk(5) = params.rho0 * grid.mass_a;
    op.gram = std::move(gmat);

    // Gram-weighted generator pairing (Aw, v)_H in integrated-by-parts form,
    // valid on the constrained subspace: every boundary term is rewritten
    // through the constraint rows so that cancellations happen blockwise at
    // the matrix level. What remains splits into an exactly skew part and
    // the negative dissipation form; the compression keeps that split, so
    // the reduced generator contracts by construction.
    Eigen::MatrixXd kmat = Eigen::MatrixXd::Zero(n, n);
    auto kblk = [&](int bi, int bj) -> Eigen::Block<Eigen::MatrixXd> {
        return kmat.block(lay.offset(bi), lay.offset(bj), lay.size(bi), lay.size(bj));
    };
    const Eigen::RowVectorXd eval_in = unit_row(na, na - 1);
    const Eigen::RowVectorXd eval_out = unit_row(na, 0);
    const Eigen::RowVectorXd d1_in = grid.annulus.d[0].row(na - 1);

    // Interface flux coupling between plate velocity and temperature; the
    // transposed partner block makes the pair exactly skew.
    const Eigen::MatrixXd couple_w2_w5 =
        params.alpha * (grid.grad_a + circle_pair(grid.geom.r_in, d1_in, eval_in));

    kblk(1, 2) = params.beta1 * h2_form;
    kblk(2, 1) = -params.beta1 * h2_form;
    kblk(2, 5) = couple_w2_w5;
    kblk(5, 2) = -couple_w2_w5.transpose();
    kblk(3, 4) = params.beta2 * grid.grad_d;
    kblk(4, 3) = -params.beta2 * grid.grad_d;

    // Constraints, equilibrated before the null-space computation.
    ConstraintRows cs = constraint_rows(params, grid, kind);
    Eigen::MatrixXd c = cs.rows;
    for (int i = 0; i < c.rows(); ++i) {
        const double s = c.row(i).norm();
        if (s > 0.0) c.row(i) /= s;
    }
    op.constraints = cs.rows;
    op.constraint_names = cs.names;

    const int nc = static_cast<int>(c.rows());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
    const double tol = 1e-10;
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > tol * svd.singularValues()[0]) ++rank;
    if (rank < nc) {
        // Identify dependent rows via a rank-revealing QR of the transpose.
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(c.transpose());
        qr.setThreshold(tol);
        std::string offending;
        for (int i = qr.rank(); i < nc; ++i) {
            const int idx = qr.colsPermutation().indices()[i];
            offending += (offending.empty() ? "" : ", ") + std::to_string(idx);
        }
        throw NumericalError(ctx, "dependent constraint rows: {" + offending + "}");
    }
    Eigen::MatrixXd v0 = svd.matrixV().rightCols(n - rank);

    // Orthonormalize in the gram metric.
    const Eigen::MatrixXd b = v0.transpose() * op.gram * v0;
    Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (b + b.transpose()));
    if (llt.info() != Eigen::Success)
        throw NumericalError(
            ctx, "gram is not positive definite on the constrained subspace "
                 "(resolution too small?)");
    op.basis = llt.matrixU().solve<Eigen::OnTheRight>(v0);

    // Compress: skew part symmetrized away to exact skewness, dissipation
    // part accumulated as -Y^T Y from weighted factor matrices so it stays
    // negative semidefinite in floating point.
    const int nred = static_cast<int>(op.basis.cols());
    Eigen::MatrixXd skew = op.basis.transpose() * kmat * op.basis;
    skew = 0.5 * (skew - skew.transpose()).eval();

    Eigen::MatrixXd diss = Eigen::MatrixXd::Zero(nred, nred);
    auto add_factor = [&](const Eigen::MatrixXd& y) { diss -= y.transpose() * y; };
    const double k2 = double(grid.k) * grid.k;
    {
        const Eigen::MatrixXd b4 = op.basis.middleRows(lay.offset(4), nd);
        const Eigen::MatrixXd b5 = op.basis.middleRows(lay.offset(5), na);
        if (params.m > 0.0) {
            const Eigen::ArrayXd r = grid.disk.fine_nodes.array();
            const Eigen::ArrayXd wr = kTwoPi * params.m * grid.disk.fine_w.array() * r;
            add_factor(wr.sqrt().matrix().asDiagonal() * (grid.disk.phi[1] * b4));
            if (grid.k != 0) {
                const Eigen::ArrayXd wq = kTwoPi * params.m * k2 * grid.disk.fine_w.array() / r;
                add_factor(wq.sqrt().matrix().asDiagonal() * (grid.disk.phi[0] * b4));
            }
        }
        const Eigen::ArrayXd ra = grid.annulus.fine_nodes.array();
        const Eigen::ArrayXd wra = kTwoPi * params.beta * grid.annulus.fine_w.array() * ra;
        add_factor(wra.sqrt().matrix().asDiagonal() * (grid.annulus.phi[1] * b5));
        if (grid.k != 0) {
            const Eigen::ArrayXd wqa =
                kTwoPi * params.beta * k2 * grid.annulus.fine_w.array() / ra;
            add_factor(wqa.sqrt().matrix().asDiagonal() * (grid.annulus.phi[0] * b5));
        }
        if (params.sigma > 0.0) {
            const Eigen::ArrayXd wm = kTwoPi * params.sigma * grid.annulus.fine_w.array() * ra;
            add_factor(wm.sqrt().matrix().asDiagonal() * (grid.annulus.phi[0] * b5));
        }
        const double c_out = kTwoPi * params.beta * params.kappa * grid.geom.r_out;
        const double c_in = kTwoPi * params.beta * params.kappa * grid.geom.r_in;
        add_factor(std::sqrt(c_out) * b5.topRows(1));
        add_factor(std::sqrt(c_in) * b5.bottomRows(1));
    }
    diss = 0.5 * (diss + diss.transpose()).eval();
    op.reduced = skew + diss;
    return op;
}

double energy(const ModeOperator& op, const StateVector& w) {
    if (!(w.layout == op.layout)) throw UsageError("energy: layout mismatch");
    return (w.data.adjoint() * op.gram * w.data)(0).real();
}

double dissipation_rate(const PhysicalParams& params, const ModeGrid& grid,
                        const StateVector& w) {
    const auto w4 = w.block(4);
    const auto w5 = w.block(5);
    double d = 0.0;
    d += params.m * (w4.adjoint() * grid.grad_d * w4)(0).real();
    d += params.sigma * (w5.adjoint() * grid.mass_a * w5)(0).real();
    d += params.beta * (w5.adjoint() * grid.grad_a * w5)(0).real();
    const double bdry = grid.geom.r_out * std::norm(w5[0]) +
                        grid.geom.r_in * std::norm(w5[w5.size() - 1]);
    d += params.beta * params.kappa * kTwoPi * bdry;
    return d;
}

double raw_dissipativity_pairing(const ModeOperator& op, const StateVector& w) {
    const Eigen::VectorXcd aw = op.generator * w.data;
    return (w.data.adjoint() * op.gram * aw)(0).real();
}

BlockCoeffs draw_smooth_coeffs(std::mt19937_64& rng, int degree, double decay) {
    BlockCoeffs coeffs;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& block : coeffs) {
        block.resize(degree + 1);
        double amp = 1.0;
        for (int m = 0; m <= degree; ++m) {
            block[m] = std::complex<double>(u(rng), u(rng)) * amp;
            amp *= decay;
        }
    }
    return coeffs;
}

namespace {

// Annulus basis: T_m(s), s the affine map of [r_in, r_out] to [-1, 1].
// Disk basis: (r/R)^(k mod 2) T_m(t), t = 2 (r/R)^2 - 1.
double annulus_basis(const Geometry& geom, int m, double r) {
    const double s = (2.0 * r - geom.r_in - geom.r_out) / (geom.r_out - geom.r_in);
    return colloc::chebyshev_t(m, s);
}

double disk_basis(const Geometry& geom, int k, int m, double r) {
    const double q = r / geom.r_in;
    const double t = 2.0 * q * q - 1.0;
    // Match the physical regularity r^|k| at the origin up to second order:
    // beyond that the vanishing rate buys nothing for the quadratures.
    double prefactor = 1.0;
    if (std::abs(k) % 2 != 0)
        prefactor = q;
    else if (k != 0)
        prefactor = q * q;
    return prefactor * colloc::chebyshev_t(m, t);
}

} // namespace

StateVector realize_coeff_state(const BlockCoeffs& coeffs, int k, const ModeGrid& grid) {
    if (k != grid.k) throw UsageError("realize_coeff_state: mode mismatch");
    StateVector w = StateVector::zero(BlockLayout{grid.n_annulus, grid.n_disk});
    for (int b = 1; b <= 5; ++b) {
        const Eigen::VectorXcd& c = coeffs[b - 1];
        const bool on_disk = (b == 3 || b == 4);
        const auto& nodes = on_disk ? grid.disk.nodes : grid.annulus.nodes;
        for (int i = 0; i < nodes.size(); ++i) {
            std::complex<double> acc = 0.0;
            for (int m = 0; m < c.size(); ++m)
                acc += c[m] * (on_disk ? disk_basis(grid.geom, k, m, nodes[i])
                                       : annulus_basis(grid.geom, m, nodes[i]));
            w.block(b)[i] = acc;
        }
    }
    return w;
}

ConstrainedStateBasis::ConstrainedStateBasis(const PhysicalParams& params,
                                             const Geometry& geometry, int k,
                                             int degree, SystemKind kind,
                                             int reference_n)
    : geom_(geometry), k_(k), degree_(degree) {
    const int nb = 5 * (degree + 1);
    const ModeGrid ref = build_mode_grid(geometry, k, reference_n, reference_n);
    const BlockLayout lay{reference_n, reference_n};

    // Block-diagonal evaluation of the coefficient basis on the reference grid.
    Eigen::MatrixXd basis_eval = Eigen::MatrixXd::Zero(lay.total(), nb);
    for (int b = 1; b <= 5; ++b) {
        const bool on_disk = (b == 3 || b == 4);
        const auto& nodes = on_disk ? ref.disk.nodes : ref.annulus.nodes;
        for (int i = 0; i < nodes.size(); ++i)
            for (int m = 0; m <= degree; ++m)
                basis_eval(lay.offset(b) + i, (b - 1) * (degree + 1) + m) =
                    on_disk ? disk_basis(geometry, k, m, nodes[i])
                            : annulus_basis(geometry, m, nodes[i]);
    }

    ConstraintRows cs = constraint_rows(params, ref, kind);
    for (int i = 0; i < cs.rows.rows(); ++i) {
        const double s = cs.rows.row(i).norm();
        if (s > 0.0) cs.rows.row(i) /= s;
    }
    functionals_ = cs.rows * basis_eval;

    // Weighted minimum-norm correction: delta = -D (B D)^+ (B c) with
    // D = diag(decay^m per block). Assembled as a map applied to the
    // constraint residual, so no badly scaled matrix is ever stored.
    Eigen::VectorXd weights(nb);
    for (int b = 0; b < 5; ++b) {
        double w = 1.0;
        for (int m = 0; m <= degree; ++m) {
            weights[b * (degree + 1) + m] = w;
            w *= 0.6;
        }
    }
    const Eigen::MatrixXd bd = functionals_ * weights.asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(bd, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double tol = 1e-12 * svd.singularValues()[0];
    const int rank_max = static_cast<int>(svd.singularValues().size());
    Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(rank_max);
    for (int i = 0; i < rank_max; ++i)
        if (svd.singularValues()[i] > tol) inv_sv[i] = 1.0 / svd.singularValues()[i];
    correction_ = weights.asDiagonal() * svd.matrixV() * inv_sv.asDiagonal() *
                  svd.matrixU().transpose();
}

BlockCoeffs ConstrainedStateBasis::project(const BlockCoeffs& coeffs) const {
    const int d1 = degree_ + 1;
    Eigen::VectorXcd stacked = Eigen::VectorXcd::Zero(5 * d1);
    for (int b = 0; b < 5; ++b) {
        const int len = std::min<int>(d1, static_cast<int>(coeffs[b].size()));
        stacked.segment(b * d1, len) = coeffs[b].head(len);
    }
    auto apply = [&](const Eigen::VectorXd& part) {
        return (part - correction_ * (functionals_ * part)).eval();
    };
    const Eigen::VectorXd re = apply(stacked.real());
    const Eigen::VectorXd im = apply(stacked.imag());
    BlockCoeffs out;
    for (int b = 0; b < 5; ++b)
        out[b] = re.segment(b * d1, d1).cast<std::complex<double>>() +
                 std::complex<double>(0.0, 1.0) *
                     im.segment(b * d1, d1).cast<std::complex<double>>();
    return out;
}

StateVector ConstrainedStateBasis::realize(const BlockCoeffs& coeffs,
                                           const ModeGrid& grid) const {
    return realize_coeff_state(coeffs, k_, grid);
}

} // namespace pmstab
