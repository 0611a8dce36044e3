#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "pmstab/colloc.hpp"
#include "pmstab/params.hpp"

namespace pmstab {

enum class Domain { annulus, disk };

// One radial subdomain of a mode grid: collocation nodes, differentiation
// matrices, coarse quadrature and the fine-grid evaluation operators used for
// assembling inner-product forms.
struct RadialPart {
    Eigen::VectorXd nodes;            // descending; endpoints are grid nodes
    std::vector<Eigen::MatrixXd> d;   // d[0]..d[3] = 1st..4th derivative
    Eigen::VectorXd quad;             // per-node weights incl. Jacobian r and 2*pi

    // Fine Gauss-Legendre rule and fine-node evaluation of the 0th..4th
    // derivative of the coarse interpolant.
    Eigen::VectorXd fine_nodes;
    Eigen::VectorXd fine_w;
    std::vector<Eigen::MatrixXd> phi; // phi[m]: (n_fine x n)
};

// Radial collocation data for one angular wavenumber k. The disk part works
// on the positive half of a symmetric grid; even/odd parity of the mode is
// folded into its matrices, so profiles are polynomials of matching parity.
//
// The form matrices realize per-mode sesquilinear integrals over the full
// 2D domains (angular factor 2*pi included):
//   mass_*      L2 product
//   grad_*      gradient product (|u'|^2 + k^2 |u|^2 / r^2)
//   lap_pair_*  pairing (Laplacian_k u, v)
//   lapsq_form  (Laplacian_k u, Laplacian_k v)        (annulus only)
//   hess_form   Frobenius product of Hessians         (annulus only)
// They are assembled on the fine rule, so Green-type identities between the
// pairings and the forms hold to roundoff for grid data.
struct ModeGrid {
    Geometry geom;
    int k = 0;
    int n_annulus = 0;
    int n_disk = 0;

    RadialPart annulus;
    RadialPart disk;

    Eigen::MatrixXd mass_a, grad_a, lap_pair_a, lapsq_form_a, hess_form_a;
    Eigen::MatrixXd mass_d, grad_d, lap_pair_d;
};

// Builds the per-mode grid. n_annulus / n_disk are the retained radial node
// counts (>= 8). The disk grid excludes r = 0 by construction.
ModeGrid build_mode_grid(const Geometry& geometry, int k, int n_annulus, int n_disk);

// Collocation matrix of d^2/dr^2 + (1/r) d/dr - k^2/r^2 on the chosen domain.
Eigen::MatrixXd laplacian_k(const ModeGrid& grid, Domain domain);

// Collocation bilaplacian on the annulus, assembled as the square of
// laplacian_k on the shared grid.
Eigen::MatrixXd bilaplacian_k(const ModeGrid& grid);

enum class BoundaryWhich {
    dirichlet_gamma,
    neumann_gamma,
    robin_gamma,
    robin_interface,
    continuity_interface,
    b1_interface,
    b2_interface,
    normal_derivative_interface,
};

// Scalar coefficients some boundary rows need: mu for the plate operators,
// kappa for the Robin rows.
struct BoundaryCoeffs {
    std::optional<double> mu;
    std::optional<double> kappa;
};

// A boundary functional split over the two subdomain profiles. Parts not
// touched by the requested operator have size 0. continuity_interface means
// annulus-trace minus disk-trace; normal_derivative_interface fills both
// parts independently (normal of the annulus, pointing into the disk).
struct BoundaryRow {
    Eigen::RowVectorXd annulus;
    Eigen::RowVectorXd disk;
};

BoundaryRow boundary_rows(const ModeGrid& grid, BoundaryWhich which,
                          const BoundaryCoeffs& coeffs = {});

// Plate boundary operators B1 (second order) and B2 (third order) on either
// circle of the annulus, in polar per-mode form. The transmission conditions
// use them on the interface; the outer-circle variants appear in the
// integration-by-parts pairings of the assembled operator.
enum class Circle { outer, interface };
struct PlateRows {
    Eigen::RowVectorXd b1;
    Eigen::RowVectorXd b2;
};
PlateRows plate_rows(const ModeGrid& grid, double mu, Circle circle);

// Range of q(x) . nu(x) over the interface circle, q(x) = x - x0, nu the
// outward normal of the annulus there (pointing at the centre). On a centred
// circle q . nu = -r_in + x0 . r_hat, so the range is -r_in -+ |x0|.
struct GcScanResult {
    double min = 0.0;
    double max = 0.0;
    bool satisfied() const { return max <= 0.0; }
};
GcScanResult geometric_condition_scan(const Geometry& geometry,
                                      const Eigen::Vector2d& x0);

} // namespace pmstab
