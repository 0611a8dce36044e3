#include "pmstab/colloc.hpp"

#include <cmath>

#include "pmstab/errors.hpp"

namespace pmstab::colloc {

Eigen::VectorXd lobatto_nodes(int n, double a, double b) {
    if (n < 2) throw UsageError("lobatto_nodes: need at least 2 nodes");
    Eigen::VectorXd r(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int j = 0; j < n; ++j)
        r[j] = c + h * std::cos(j * M_PI / (n - 1));
    // Pin the endpoints exactly.
    r[0] = b;
    r[n - 1] = a;
    return r;
}

Eigen::VectorXd lobatto_barycentric_weights(int n) {
    Eigen::VectorXd w(n);
    for (int j = 0; j < n; ++j)
        w[j] = (j % 2 == 0) ? 1.0 : -1.0;
    w[0] *= 0.5;
    w[n - 1] *= 0.5;
    return w;
}

std::vector<Eigen::MatrixXd> differentiation_matrices(const Eigen::VectorXd& nodes,
                                                      const Eigen::VectorXd& bary,
                                                      int max_order,
                                                      const Eigen::MatrixXd* diff_table) {
    const int n = static_cast<int>(nodes.size());
    std::vector<Eigen::MatrixXd> out;
    out.reserve(max_order);
    Eigen::MatrixXd prev = Eigen::MatrixXd::Identity(n, n);
    for (int order = 1; order <= max_order; ++order) {
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            double diag = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double ratio = bary[j] / bary[i];
                const double dx = diff_table ? (*diff_table)(i, j) : nodes[i] - nodes[j];
                double entry;
                if (order == 1)
                    entry = ratio / dx;
                else
                    entry = order / dx * (ratio * prev(i, i) - prev(i, j));
                d(i, j) = entry;
                diag -= entry;
            }
            d(i, i) = diag;
        }
        out.push_back(d);
        prev = out.back();
    }
    return out;
}

Eigen::MatrixXd lobatto_diff_table(int n, double a, double b) {
    Eigen::MatrixXd dx(n, n);
    const double h = M_PI / (n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            dx(i, j) = (b - a) * std::sin(0.5 * (i + j) * h) * std::sin(0.5 * (j - i) * h);
    return dx;
}

QuadRule gauss_legendre(int n, double a, double b) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double off = k / std::sqrt(4.0 * k * k - 1.0);
        jac(k, k - 1) = off;
        jac(k - 1, k) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    if (es.info() != Eigen::Success)
        throw NumericalError("gauss_legendre", "Jacobi matrix eigensolve failed");
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = c + h * es.eigenvalues()[i];
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = 2.0 * v0 * v0 * h;
    }
    return rule;
}

Eigen::MatrixXd resample_matrix(const Eigen::VectorXd& src_nodes,
                                const Eigen::VectorXd& src_bary,
                                const Eigen::VectorXd& dst_nodes) {
    const int ns = static_cast<int>(src_nodes.size());
    const int nd = static_cast<int>(dst_nodes.size());
    const double scale = src_nodes.cwiseAbs().maxCoeff() + 1.0;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nd, ns);
    for (int i = 0; i < nd; ++i) {
        int hit = -1;
        for (int j = 0; j < ns; ++j) {
            if (std::abs(dst_nodes[i] - src_nodes[j]) < 1e-14 * scale) {
                hit = j;
                break;
            }
        }
        if (hit >= 0) {
            m(i, hit) = 1.0;
            continue;
        }
        double denom = 0.0;
        for (int j = 0; j < ns; ++j) {
            const double t = src_bary[j] / (dst_nodes[i] - src_nodes[j]);
            m(i, j) = t;
            denom += t;
        }
        m.row(i) /= denom;
    }
    return m;
}

double chebyshev_t(int m, double s) {
    s = std::min(1.0, std::max(-1.0, s));
    return std::cos(m * std::acos(s));
}

namespace {

// int_{-1}^{1} T_m = 2/(1-m^2) for even m, 0 for odd m.
double chebyshev_integral(int m) {
    if (m % 2 == 1) return 0.0;
    return 2.0 / (1.0 - static_cast<double>(m) * m);
}

} // namespace

Eigen::VectorXd interval_weights(const Eigen::VectorXd& nodes, double a, double b) {
    const int n = static_cast<int>(nodes.size());
    Eigen::MatrixXd vt(n, n); // vt(m, j) = T_m(s_j)
    Eigen::VectorXd mom(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j < n; ++j)
            vt(m, j) = chebyshev_t(m, (nodes[j] - c) / h);
        mom[m] = h * chebyshev_integral(m);
    }
    return vt.partialPivLu().solve(mom);
}

Eigen::VectorXd disk_half_weights(const Eigen::VectorXd& nodes, double radius) {
    const int n = static_cast<int>(nodes.size());
    // Basis q_m(r) = r * T_m(2 (r/R)^2 - 1); moments int_0^R q_m dr = R^2/4 * I_m.
    Eigen::MatrixXd vt(n, n);
    Eigen::VectorXd mom(n);
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j < n; ++j) {
            const double t = 2.0 * (nodes[j] / radius) * (nodes[j] / radius) - 1.0;
            vt(m, j) = nodes[j] * chebyshev_t(m, t);
        }
        mom[m] = 0.25 * radius * radius * chebyshev_integral(m);
    }
    return vt.partialPivLu().solve(mom);
}

} // namespace pmstab::colloc
