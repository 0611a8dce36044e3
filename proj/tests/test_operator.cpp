#include <doctest.h>
#include <random>

#include "oracles.hpp"
#include "pmstab/errors.hpp"
#include "pmstab/operator.hpp"
#include "pmstab/stability.hpp"

using namespace pmstab;

namespace {
const Geometry kGeom;

StateVector random_constrained_state(const ConstrainedStateBasis& basis,
                                     const ModeGrid& grid, std::mt19937_64& rng,
                                     int degree = 12, double decay = 0.75) {
    return basis.realize(basis.project(draw_smooth_coeffs(rng, degree, decay)), grid);
}
} // namespace

TEST_CASE("zero state, energy basics") {
    PhysicalParams pm;
    const ModeGrid grid = build_mode_grid(kGeom, 0, 24, 24);
    const ModeOperator op = assemble(pm, grid);

    StateVector zero = StateVector::zero(op.layout);
    CHECK(energy(op, zero) == 0.0);
    CHECK((op.generator * zero.data).norm() == 0.0);

    // constant membrane velocity: rho2 |c|^2 pi r_in^2
    StateVector w = StateVector::zero(op.layout);
    w.block(4).setConstant(std::complex<double>(0.0, 2.0));
    CHECK(energy(op, w) == doctest::Approx(4.0 * M_PI).epsilon(1e-12));

    // quadratic scaling
    std::mt19937_64 rng(1);
    ConstrainedStateBasis basis(pm, kGeom, 0, 12);
    StateVector s = random_constrained_state(basis, grid, rng);
    StateVector s2 = s;
    s2.data *= 2.0;
    CHECK(energy(op, s2) == doctest::Approx(4.0 * energy(op, s)).epsilon(1e-12));

    StateVector wrong = StateVector::zero(BlockLayout{16, 16});
    CHECK_THROWS_AS(energy(op, wrong), UsageError);
}

TEST_CASE("dissipation rate formula") {
    PhysicalParams pm;
    pm.m = 1.0;
    const ModeGrid grid = build_mode_grid(kGeom, 0, 24, 24);
    const ModeOperator op = assemble(pm, grid);

    // w4 = w5 = 0: no dissipation regardless of the other blocks
    StateVector w = StateVector::zero(op.layout);
    w.block(1).setRandom();
    w.block(2).setRandom();
    w.block(3).setRandom();
    CHECK(dissipation_rate(pm, grid, w) == 0.0);

    // constant temperature: only the Robin boundary term survives
    PhysicalParams pm2;
    pm2.m = 0.0;
    pm2.sigma = 0.0;
    pm2.kappa = 0.7;
    pm2.beta = 2.0;
    StateVector w5 = StateVector::zero(op.layout);
    w5.block(5).setConstant(3.0);
    const double expected = pm2.beta * pm2.kappa * 9.0 * 2.0 * M_PI *
                            (kGeom.r_in + kGeom.r_out);
    CHECK(dissipation_rate(pm2, grid, w5) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("gram and basis invariants") {
    PhysicalParams pm;
    for (int k : {0, 1, 5}) {
        const ModeGrid grid = build_mode_grid(kGeom, k, 24, 24);
        const ModeOperator op = assemble(pm, grid);

        // gram-orthonormal basis spanning ker(constraints)
        const Eigen::MatrixXd vgv = op.basis.transpose() * op.gram * op.basis;
        CHECK((vgv - Eigen::MatrixXd::Identity(vgv.rows(), vgv.cols()))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        Eigen::MatrixXd ceq = op.constraints;
        for (int i = 0; i < ceq.rows(); ++i) ceq.row(i) /= ceq.row(i).norm();
        CHECK((ceq * op.basis).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(op.basis.cols() == op.layout.total() - 10);

        // gram is symmetric positive definite on the constrained subspace
        CHECK((op.gram - op.gram.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("dissipativity of the raw pairing on smooth constrained states") {
    Geometry geom;
    std::mt19937_64 rng(23);
    for (double m : {0.0, 1.0}) {
        PhysicalParams pm;
        pm.m = m;
        for (int k : {0, 3, 8}) {
            const ModeGrid grid = build_mode_grid(geom, k, 32, 32);
            const ModeOperator op = assemble(pm, grid);
            const ConstrainedStateBasis basis(pm, geom, k, 12);
            for (int trial = 0; trial < 25; ++trial) {
                const StateVector w = random_constrained_state(basis, grid, rng);
                const double e = energy(op, w);
                CHECK(raw_dissipativity_pairing(op, w) <= 1e-8 * e);
                // constrained states satisfy every row
                Eigen::MatrixXd ceq = op.constraints;
                for (int i = 0; i < ceq.rows(); ++i) ceq.row(i) /= ceq.row(i).norm();
                CHECK((ceq * w.data).cwiseAbs().maxCoeff() < 1e-10 * std::sqrt(e));
            }
        }
    }
}

TEST_CASE("integration-by-parts defect shrinks under refinement") {
    Geometry geom;
    PhysicalParams pm;
    std::mt19937_64 rng(29);
    for (int k : {0, 5}) {
        const ConstrainedStateBasis basis(pm, geom, k, 120, SystemKind::full, 128);
        const ModeGrid g32 = build_mode_grid(geom, k, 32, 32);
        const ModeGrid g64 = build_mode_grid(geom, k, 64, 64);
        const ModeOperator o32 = assemble(pm, g32);
        const ModeOperator o64 = assemble(pm, g64);
        double eps32 = 0.0, eps64 = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const BlockCoeffs c = basis.project(draw_smooth_coeffs(rng, 120, 0.4));
            const StateVector w32 = basis.realize(c, g32);
            const StateVector w64 = basis.realize(c, g64);
            eps32 = std::max(eps32, std::abs(raw_dissipativity_pairing(o32, w32) +
                                             dissipation_rate(pm, g32, w32)));
            eps64 = std::max(eps64, std::abs(raw_dissipativity_pairing(o64, w64) +
                                             dissipation_rate(pm, g64, w64)));
        }
        CHECK(eps32 >= 4.0 * eps64);
    }
}

TEST_CASE("membrane oracle: decoupled spectrum hits the Bessel zeros") {
    const std::vector<double> zeros = oracles::bessel_j0_zeros(3);
    // sanity of the oracle itself
    CHECK(zeros[0] == doctest::Approx(2.404826).epsilon(1e-6));

    PhysicalParams pm;
    const ModeGrid grid = build_mode_grid(kGeom, 0, 32, 32);
    const ModeOperator op = assemble(pm, grid, SystemKind::membrane_dirichlet);
    const Eigen::VectorXcd eigs = spectrum(op);

    std::vector<double> freqs;
    for (int i = 0; i < eigs.size(); ++i) {
        CHECK(std::abs(eigs[i].real()) < 1e-8);
        if (eigs[i].imag() > 0) freqs.push_back(eigs[i].imag());
    }
    std::sort(freqs.begin(), freqs.end());
    REQUIRE(freqs.size() >= 3);
    CHECK(std::abs(freqs[0] - zeros[0]) < 1e-6);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(freqs[j] - zeros[j]) < 1e-4);

    // non-unit constants: frequencies scale by sqrt(beta2 / rho2) / r_in
    PhysicalParams pm2;
    pm2.beta2 = 2.0;
    pm2.rho2 = 0.5;
    const ModeOperator op2 = assemble(pm2, grid, SystemKind::membrane_dirichlet);
    const Eigen::VectorXcd eigs2 = spectrum(op2);
    double lead = 1e300;
    for (int i = 0; i < eigs2.size(); ++i)
        if (eigs2[i].imag() > 0) lead = std::min(lead, eigs2[i].imag());
    CHECK(std::abs(lead - 2.0 * zeros[0]) < 1e-6);
}

TEST_CASE("reduced generator properties") {
    PhysicalParams pm;
    std::mt19937_64 rng(31);
    for (int k : {0, 5, 12, 24}) {
        const ModeGrid grid = build_mode_grid(kGeom, k, 32, 32);
        const ModeOperator op = assemble(pm, grid);
        const Eigen::VectorXcd eigs = spectrum(op);

        // spectrum in the closed left half-plane, conjugation-symmetric
        CHECK(eigs[0].real() <= 1e-8);
        for (int i = 0; i < eigs.size(); ++i) {
            const std::complex<double> conj = std::conj(eigs[i]);
            double best = 1e300;
            for (int j = 0; j < eigs.size(); ++j)
                best = std::min(best, std::abs(eigs[j] - conj));
            CHECK(best < 1e-8 * (std::abs(eigs[i]) + 1.0));
        }

        // image of the compression satisfies the constraint rows
        Eigen::VectorXcd x = Eigen::VectorXcd::Random(op.reduced.rows());
        const StateVector image = op.lift((op.reduced * x).eval());
        Eigen::MatrixXd ceq = op.constraints;
        for (int i = 0; i < ceq.rows(); ++i) ceq.row(i) /= ceq.row(i).norm();
        CHECK((ceq * image.data).cwiseAbs().maxCoeff() <
              1e-8 * (image.data.norm() + 1.0));
    }

    // invertibility at zero: smallest singular value positive and stable
    // within 10% under doubling
    for (int k : {0, 3}) {
        auto smin = [&](int n) {
            const ModeGrid grid = build_mode_grid(kGeom, k, n, n);
            const ModeOperator op = assemble(pm, grid);
            Eigen::BDCSVD<Eigen::MatrixXd> svd(op.reduced);
            return svd.singularValues().minCoeff();
        };
        const double s32 = smin(32), s64 = smin(64);
        CHECK(s32 > 0.0);
        CHECK(std::abs(s32 - s64) <= 0.1 * std::max(s32, s64));
    }
    (void)rng;
}

TEST_CASE("projection onto the constrained subspace") {
    PhysicalParams pm;
    const ModeGrid grid = build_mode_grid(kGeom, 2, 24, 24);
    const ModeOperator op = assemble(pm, grid);

    StateVector w = StateVector::zero(op.layout);
    w.data.setRandom();
    const StateVector p = op.project(w);
    const StateVector pp = op.project(p);
    CHECK((pp.data - p.data).norm() < 1e-10 * (p.data.norm() + 1.0));
    CHECK(energy(op, p) <= (w.data.adjoint() * op.gram * w.data)(0).real() + 1e-10);
}

TEST_CASE("dependent constraint rows are reported") {
    Eigen::MatrixXd rows(3, 5);
    rows << 1, 0, 0, 0, 0, //
        0, 1, 0, 0, 0,     //
        2, 0, 0, 0, 0;     // duplicate direction of row 0
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 1e-10 * svd.singularValues()[0]) ++rank;
    CHECK(rank == 2);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rows.transpose());
    qr.setThreshold(1e-10);
    CHECK(qr.rank() == 2);
    // the dropped pivot identifies a dependent row
    const int dependent = qr.colsPermutation().indices()[2];
    CHECK((dependent == 0 || dependent == 2));
}
