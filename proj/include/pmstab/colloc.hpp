#pragma once

#include <Eigen/Dense>
#include <vector>

namespace pmstab::colloc {

// Chebyshev-Gauss-Lobatto nodes mapped to [a, b], ordered descending from b
// to a (node 0 sits at b).
Eigen::VectorXd lobatto_nodes(int n, double a, double b);

// Closed-form barycentric weights for the Lobatto grid: (-1)^j, halved at the
// two endpoints. Any common scale factor is irrelevant.
Eigen::VectorXd lobatto_barycentric_weights(int n);

// Differentiation matrices of orders 1..max_order on an arbitrary node set
// with the given barycentric weights (Welfert recursion, negative-sum
// diagonal). Exact on polynomials of degree < n. diff_table, when given,
// supplies precomputed pairwise differences nodes[i] - nodes[j]; for
// Chebyshev grids the trigonometric table avoids the cancellation that
// otherwise dominates high-order matrices.
std::vector<Eigen::MatrixXd> differentiation_matrices(const Eigen::VectorXd& nodes,
                                                      const Eigen::VectorXd& bary,
                                                      int max_order,
                                                      const Eigen::MatrixXd* diff_table = nullptr);

// Pairwise node differences for the Lobatto grid on [a, b], evaluated as
// (b-a) sin((i+j)h/2) sin((j-i)h/2) with h = pi/(n-1).
Eigen::MatrixXd lobatto_diff_table(int n, double a, double b);

// Gauss-Legendre rule on [a, b] via Golub-Welsch. Nodes ascending.
struct QuadRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};
QuadRule gauss_legendre(int n, double a, double b);

// Interpolation matrix from src (with barycentric weights) to arbitrary
// target nodes. Rows that land exactly on a source node become unit rows.
Eigen::MatrixXd resample_matrix(const Eigen::VectorXd& src_nodes,
                                const Eigen::VectorXd& src_bary,
                                const Eigen::VectorXd& dst_nodes);

// Weights w on the given annulus nodes with sum_j w_j p(r_j) = int_a^b p dr
// for every polynomial p of degree < n (moment fit in the mapped Chebyshev
// basis).
Eigen::VectorXd interval_weights(const Eigen::VectorXd& nodes, double a, double b);

// Weights w on the positive half-grid nodes (subset of a Lobatto grid on
// [-R, R]) with sum_j w_j q(r_j) = int_0^R q dr for every odd polynomial q of
// degree <= 2n-1. Odd exactness is the natural class: every per-mode disk
// integrand carries the Jacobian r times an even profile product.
Eigen::VectorXd disk_half_weights(const Eigen::VectorXd& nodes, double radius);

// Chebyshev polynomial T_m, s clamped to [-1, 1].
double chebyshev_t(int m, double s);

} // namespace pmstab::colloc
