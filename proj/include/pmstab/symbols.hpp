#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "pmstab/params.hpp"

namespace pmstab {

using Complex = std::complex<double>;

// Coefficients of the scaled characteristic cubic p(z) = z^3 + a z^2 + b z + c
// of the plate-heat principal symbol. For positive coefficients the Routh
// condition a*b > c is equivalent to all roots lying in the open left
// half-plane.
struct CubicCoeffs {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    bool routh_condition() const { return a * b > c; }
};

// A point (lambda, xi) of the joint symbol parameter space.
struct SymbolPoint {
    Complex lambda;
    Eigen::Vector2d xi = Eigen::Vector2d::Zero();
};

// Which boundary operator triple closes the half-line symbol problem:
// clamped_robin = {trace, normal derivative, Robin};
// free_robin    = {plate moment B1 + temperature, plate shear B2 + heat flux,
//                  Robin}.
enum class LsBoundarySet { clamped_robin, free_robin };

struct LsProblem {
    PhysicalParams params;
    double xi1 = 0.0;
    Complex lambda;
    LsBoundarySet bc_set = LsBoundarySet::clamped_robin;
};

// Cubic coefficients a = beta/rho0, b = (alpha^2 + beta1 rho0)/(rho0 rho1),
// c = beta beta1/(rho0 rho1); the frequency magnitude scales out, so xi_norm
// only gates the degenerate xi = 0 case (where the determinant is lambda^3
// and the caller handles it directly).
CubicCoeffs characteristic_cubic(const PhysicalParams& params, double xi_norm);

// True iff every root of the cubic has negative real part (Routh criterion
// for positive coefficients). Throws on nonpositive coefficients.
bool hurwitz_stable(const CubicCoeffs& coeffs);

// All three roots, sorted by (real part, imaginary part). Closed-form
// solution polished by a Newton step; the reconstruction error against the
// input coefficients is at the 1e-14 level for moderate magnitudes.
std::array<Complex, 3> cubic_roots(const CubicCoeffs& coeffs);

// det(lambda - A0(xi)) of the principal plate-heat symbol.
Complex principal_determinant(const PhysicalParams& params, const SymbolPoint& p);

struct SymbolSample {
    double lambda_re = 0.0;
    double lambda_im = 0.0;
    double xi1 = 0.0;
    double xi2 = 0.0;
    double value = 0.0;
};

// Minimum of |det(lambda - A0(xi))| over the anisotropic sphere
// |lambda| + |xi|^2 = 1 intersected with Re lambda >= 0, sampled on a
// grid_density^3 grid in (radius split, arg lambda, arg xi). A zero or tiny
// minimum is a finding and is reported, not thrown. `slice` holds the
// xi-direction-0 samples for serialization.
struct EllipticityScan {
    double min_abs_det = 0.0;
    SymbolPoint argmin;
    std::vector<SymbolSample> slice;
};
EllipticityScan ellipticity_scan(const PhysicalParams& params, int grid_density);

// The 3x3 boundary-symbol matrix whose columns are the boundary operators
// applied to a basis of stable solutions of the half-line symbol ODE
// (columns not yet normalized). Exposed for the scale-invariance test.
Eigen::Matrix3cd ls_matrix(const LsProblem& problem);

// Smallest singular value of the column-normalized ls_matrix; a positive
// value certifies the Lopatinskii-Shapiro condition at that point.
double lopatinskii_shapiro_check(const LsProblem& problem);

} // namespace pmstab
