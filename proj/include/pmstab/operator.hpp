#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pmstab/grid.hpp"
#include "pmstab/params.hpp"

namespace pmstab {

// Offsets of the five state blocks in the stacked per-mode vector:
// plate deflection w1, plate velocity w2, membrane deflection w3, membrane
// velocity w4, temperature w5.
struct BlockLayout {
    int n_annulus = 0;
    int n_disk = 0;

    int offset(int block) const; // block in 1..5
    int size(int block) const;
    int total() const { return 3 * n_annulus + 2 * n_disk; }
    bool operator==(const BlockLayout&) const = default;
};

// Per-mode state: complex radial samples of the five blocks.
struct StateVector {
    BlockLayout layout;
    Eigen::VectorXcd data;

    static StateVector zero(const BlockLayout& layout);

    Eigen::VectorBlock<Eigen::VectorXcd> block(int b) {
        return data.segment(layout.offset(b), layout.size(b));
    }
    Eigen::VectorXcd block(int b) const {
        return data.segment(layout.offset(b), layout.size(b));
    }
};

// Which constraint set to assemble. `full` is the coupled plate-membrane
// system; `membrane_dirichlet` zeroes the plate and temperature blocks and
// clamps the membrane at the interface, which isolates the undamped wave
// part (a unitary flow, used as comparison and as an eigenvalue oracle).
enum class SystemKind { full, membrane_dirichlet };

// Discrete generator for one angular mode.
//
// `generator` applies the PDE right-hand side by collocation on the raw
// stacked blocks. `constraints` holds the boundary/transmission rows.
// `gram` realizes the energy inner product. `basis` spans ker(constraints),
// orthonormal in the gram metric, and `reduced` is the compression
// basis^H * (gram-weighted generator pairing) * basis; the pairing is
// assembled in integrated-by-parts form so that its symmetric part equals
// the negative dissipation form up to roundoff on the constrained subspace.
struct ModeOperator {
    int k = 0;
    SystemKind kind = SystemKind::full;
    PhysicalParams params;
    Geometry geom;
    BlockLayout layout;

    Eigen::MatrixXd generator;
    Eigen::MatrixXd constraints;
    std::vector<std::string> constraint_names;
    Eigen::MatrixXd gram;
    Eigen::MatrixXd basis;
    Eigen::MatrixXd reduced;

    // Reduced coordinates x = basis^T gram w (the gram-orthogonal projection
    // when w is constrained), and the lift w = basis x.
    Eigen::VectorXcd reduce(const StateVector& w) const;
    StateVector lift(const Eigen::VectorXcd& x) const;
    StateVector project(const StateVector& w) const;

    mutable std::optional<Eigen::VectorXcd> eigenvalue_cache;
};

ModeOperator assemble(const PhysicalParams& params, const ModeGrid& grid,
                      SystemKind kind = SystemKind::full);

// The boundary/transmission rows for the given system, as assembled into
// ModeOperator::constraints.
struct ConstraintRows {
    Eigen::MatrixXd rows;
    std::vector<std::string> names;
};
ConstraintRows constraint_rows(const PhysicalParams& params, const ModeGrid& grid,
                               SystemKind kind);

// Per-block polynomial coefficients: Chebyshev in the mapped radial variable
// on the annulus, parity-matched even basis times an odd prefactor on the
// disk. One fixed coefficient vector realizes the same smooth function on
// grids of any resolution.
using BlockCoeffs = std::array<Eigen::VectorXcd, 5>;

// Evaluates block-coefficient states on a grid (no constraints applied).
StateVector realize_coeff_state(const BlockCoeffs& coeffs, int k, const ModeGrid& grid);

// States that satisfy the constraint rows as functions: the coefficient
// vector is projected onto the null space of the constraint functionals
// evaluated at a fixed reference resolution, so realizations at different
// resolutions agree on one constrained smooth state - which is what the
// refinement studies and the time stepper's initial data need.
class ConstrainedStateBasis {
public:
    ConstrainedStateBasis(const PhysicalParams& params, const Geometry& geometry,
                          int k, int degree, SystemKind kind = SystemKind::full,
                          int reference_n = 48);

    // Returns the nearest coefficient vector satisfying the constraints,
    // nearness measured in a degree-weighted norm so that corrections stay
    // smooth instead of leaking into the highest coefficients.
    BlockCoeffs project(const BlockCoeffs& coeffs) const;
    StateVector realize(const BlockCoeffs& coeffs, const ModeGrid& grid) const;

    int degree() const { return degree_; }
    int mode() const { return k_; }

private:
    Geometry geom_;
    int k_ = 0;
    int degree_ = 0;
    Eigen::MatrixXd functionals_; // constraint rows on the coefficient basis
    Eigen::MatrixXd correction_;  // minimum-weighted-norm correction map
};

// ||w||_H^2 = w^H gram w (real, >= 0).
double energy(const ModeOperator& op, const StateVector& w);

// D(w) = m ||grad w4||^2 + sigma ||w5||^2 + beta ||grad w5||^2
//        + beta kappa ||w5||^2 on both boundary circles.
double dissipation_rate(const PhysicalParams& params, const ModeGrid& grid,
                        const StateVector& w);

// Re (A_raw w, w)_gram computed with the raw collocation generator; its
// defect against -D(w) is quadrature aliasing and shrinks spectrally for
// smooth states.
double raw_dissipativity_pairing(const ModeOperator& op, const StateVector& w);

// Random smooth coefficient draw: uniform complex coefficients with the
// given geometric decay per order.
BlockCoeffs draw_smooth_coeffs(std::mt19937_64& rng, int degree = 12,
                               double decay = 0.75);

} // namespace pmstab
