// Throwaway probe for operator assembly (deleted before finish).
#include <cstdio>

#include "pmstab/operator.hpp"

using namespace pmstab;

int main() {
    Geometry geom;
    PhysicalParams pm; // all ones, sigma=1, m=0, mu=0.3, kappa=1

    // 1) Plate Green identity: fine bilaplacian pairing vs plate_pairing.
    {
        ModeGrid g = build_mode_grid(geom, 2, 24, 24);
        const auto& p = g.annulus;
        const Eigen::ArrayXd r = p.fine_nodes.array();
        const double k2 = 4.0;
        Eigen::MatrixXd bilap =
            p.phi[4] + 2.0 * (1.0 / r).matrix().asDiagonal() * p.phi[3] -
            (1.0 + 2.0 * k2) * (1.0 / (r * r)).matrix().asDiagonal() * p.phi[2] +
            (1.0 + 2.0 * k2) * (1.0 / (r * r * r)).matrix().asDiagonal() * p.phi[1] +
            (k2 * k2 - 4.0 * k2) * (1.0 / (r * r * r * r)).matrix().asDiagonal() * p.phi[0];
        Eigen::VectorXd wr = (p.fine_w.array() * r).matrix();
        Eigen::MatrixXd pair_fine =
            2 * M_PI * p.phi[0].transpose() * wr.asDiagonal() * bilap;
        // reconstruct plate_pairing through assemble?直接: use internal pieces
        double mu = 0.3;
        Eigen::MatrixXd h2 = mu * g.lapsq_form_a + (1 - mu) * g.hess_form_a;
        // replicate plate_pairing via rows
        auto rows_o = plate_rows(g, mu, Circle::outer);
        auto rows_i = plate_rows(g, mu, Circle::interface);
        int na = 24;
        Eigen::RowVectorXd e0 = Eigen::RowVectorXd::Zero(na); e0[0] = 1;
        Eigen::RowVectorXd ei = Eigen::RowVectorXd::Zero(na); ei[na-1] = 1;
        Eigen::RowVectorXd dno = g.annulus.d[0].row(0);
        Eigen::RowVectorXd dni = -g.annulus.d[0].row(na-1);
        Eigen::MatrixXd green = h2
            - 2*M_PI*geom.r_out * dno.transpose()*rows_o.b1
            + 2*M_PI*geom.r_out * e0.transpose()*rows_o.b2
            - 2*M_PI*geom.r_in * dni.transpose()*rows_i.b1
            + 2*M_PI*geom.r_in * ei.transpose()*rows_i.b2;
        std::printf("plate Green identity max defect %.3e (scale %.1e)\n",
                    (pair_fine - green).cwiseAbs().maxCoeff(),
                    green.cwiseAbs().maxCoeff());
    }

    // 2) Membrane oracle: k=0 decoupled, eigenvalues vs Bessel zeros.
    {
        ModeGrid g = build_mode_grid(geom, 0, 32, 32);
        ModeOperator op = assemble(pm, g, SystemKind::membrane_dirichlet);
        Eigen::EigenSolver<Eigen::MatrixXd> es(op.reduced);
        std::vector<double> freqs;
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            auto ev = es.eigenvalues()[i];
            if (ev.imag() > 0) freqs.push_back(ev.imag());
        }
        std::sort(freqs.begin(), freqs.end());
        std::printf("membrane eigs: %.9f %.9f %.9f (expect 2.404825558 5.520078110 8.653727913)\n",
                    freqs[0], freqs[1], freqs[2]);
        double maxre = es.eigenvalues().real().maxCoeff();
        std::printf("membrane max Re %.3e\n", maxre);
    }

    // 3) Full system: max Re eig and sym(A_red) top eigenvalue across modes.
    for (double m : {0.0, 1.0}) {
        pm.m = m;
        double worst_re = -1e300, worst_sym = -1e300;
        int worst_k = -1;
        for (int k = 0; k <= 24; ++k) {
            ModeGrid g = build_mode_grid(geom, k, 32, 32);
            ModeOperator op = assemble(pm, g);
            Eigen::EigenSolver<Eigen::MatrixXd> es(op.reduced);
            double re = es.eigenvalues().real().maxCoeff();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ses(
                0.5 * (op.reduced + op.reduced.transpose()));
            double symtop = ses.eigenvalues().maxCoeff();
            if (re > worst_re) { worst_re = re; worst_k = k; }
            worst_sym = std::max(worst_sym, symtop);
        }
        std::printf("m=%.0f: max Re eig %.3e (k=%d), max sym %.3e\n", m, worst_re,
                    worst_k, worst_sym);
    }

    // 4) dissipativity of raw pairing on smooth constrained states + refinement.
    {
        pm.m = 0.0;
        std::mt19937_64 rng(7);
        for (int k : {0, 3, 8}) {
            ModeGrid g32 = build_mode_grid(geom, k, 32, 32);
            ModeGrid g64 = build_mode_grid(geom, k, 64, 64);
            ModeOperator o32 = assemble(pm, g32);
            ModeOperator o64 = assemble(pm, g64);
            double worst_ratio = 1e300, worst_sign = -1e300, d32m = 0, d64m = 0;
            for (int trial = 0; trial < 20; ++trial) {
                SmoothStateSpec spec = draw_smooth_state(k, rng);
                StateVector w32 = o32.project(realize_state(spec, g32));
                StateVector w64 = o64.project(realize_state(spec, g64));
                double e32 = energy(o32, w32);
                double p32 = raw_dissipativity_pairing(o32, w32);
                double p64 = raw_dissipativity_pairing(o64, w64);
                double d32 = std::abs(p32 + dissipation_rate(pm, g32, w32));
                double d64 = std::abs(p64 + dissipation_rate(pm, g64, w64));
                worst_sign = std::max(worst_sign, p32 / e32);
                d32m = std::max(d32m, d32);
                d64m = std::max(d64m, d64 + 1e-300);
                worst_ratio = std::min(worst_ratio, d32 / (d64 + 1e-300));
            }
            std::printf("k=%d: max Re<Aw,w>/E %.3e, defect32 %.3e, defect64 %.3e, min ratio %.2f\n",
                        k, worst_sign, d32m, d64m, worst_ratio);
        }
    }
    return 0;
}
