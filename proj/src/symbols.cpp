#include "pmstab/symbols.hpp"

#include <algorithm>
#include <cmath>

#include "pmstab/errors.hpp"

namespace pmstab {

namespace {

void check_positive_coeffs(const CubicCoeffs& c, const char* who) {
    if (!(c.a > 0.0 && c.b > 0.0 && c.c > 0.0))
        throw ConfigError(who, "cubic coefficients must be positive");
}

// First-order companion system Y' = M Y of the half-line symbol ODE in
// Y = (u, u', u'', u''', theta, theta').
Eigen::Matrix<Complex, 6, 6> companion_system(const PhysicalParams& p, double xi1,
                                              Complex lambda) {
    const double xi2 = xi1 * xi1;
    Eigen::Matrix<Complex, 6, 6> m = Eigen::Matrix<Complex, 6, 6>::Zero();
    m(0, 1) = 1.0;
    m(1, 2) = 1.0;
    m(2, 3) = 1.0;
    // theta'' row first; it feeds the u'''' row.
    const Complex t_u = p.alpha * lambda * xi2 / p.beta;
    const Complex t_upp = -p.alpha * lambda / p.beta;
    const Complex t_t = p.rho0 * lambda / p.beta + xi2;
    m(5, 0) = t_u;
    m(5, 2) = t_upp;
    m(5, 4) = t_t;
    // u'''' = -(rho1/beta1) lambda^2 u + 2 xi^2 u'' - xi^4 u
    //         - (alpha/beta1)(theta'' - xi^2 theta)
    m(3, 0) = -p.rho1 * lambda * lambda / p.beta1 - xi2 * xi2 -
              (p.alpha / p.beta1) * t_u;
    m(3, 2) = 2.0 * xi2 - (p.alpha / p.beta1) * t_upp;
    m(3, 4) = (p.alpha / p.beta1) * (xi2 - t_t);
    m(4, 5) = 1.0;
    return m;
}

// Orthonormal basis of the stable invariant subspace (eigenvalues with
// negative real part) via the matrix sign function. Handles multiple
// characteristic roots without Jordan-chain bookkeeping; requires a spectral
// gap around the imaginary axis.
Eigen::Matrix<Complex, 6, 3> stable_subspace(const Eigen::Matrix<Complex, 6, 6>& m) {
    using Mat6 = Eigen::Matrix<Complex, 6, 6>;
    Mat6 s = m;
    bool converged = false;
    for (int it = 0; it < 80; ++it) {
        Eigen::PartialPivLU<Mat6> lu(s);
        const Complex det = lu.determinant();
        if (!(std::isfinite(det.real()) && std::isfinite(det.imag())) ||
            std::abs(det) == 0.0)
            break;
        const double scale = std::pow(std::abs(det), -1.0 / 6.0);
        const Mat6 sinv = lu.inverse();
        Mat6 next = 0.5 * (scale * s + (1.0 / scale) * sinv);
        const double delta = (next - s).norm() / std::max(1.0, next.norm());
        s = next;
        if (delta < 1e-14) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NumericalError("lopatinskii_shapiro_check",
                             "sign iteration for the stable splitting did not "
                             "converge (root on the imaginary axis?)");
    const Mat6 proj = 0.5 * (Mat6::Identity() - s);
    Eigen::JacobiSVD<Mat6> svd(proj, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    if (sv[2] < 0.9 || sv[3] > 0.1)
        throw NumericalError("lopatinskii_shapiro_check",
                             "stable/unstable split is not 3/3 "
                             "(ellipticity violated?)");
    return svd.matrixU().leftCols(3);
}

// Boundary functionals in Y-coordinates, exterior normal -d/dx2.
Eigen::Matrix<Complex, 3, 6> boundary_functionals(const PhysicalParams& p, double xi1,
                                                  LsBoundarySet set) {
    const double xi2 = xi1 * xi1;
    Eigen::Matrix<Complex, 3, 6> b = Eigen::Matrix<Complex, 3, 6>::Zero();
    if (set == LsBoundarySet::clamped_robin) {
        b(0, 0) = 1.0;  // trace u
        b(1, 1) = -1.0; // normal derivative
        b(2, 5) = -1.0; // Robin principal part: normal derivative of theta
    } else {
        // beta1 (u'' - mu xi^2 u) + alpha theta
        b(0, 0) = -p.beta1 * p.mu * xi2;
        b(0, 2) = p.beta1;
        b(0, 4) = p.alpha;
        // -beta1 (u''' - (2 - mu) xi^2 u') - alpha theta'
        b(1, 1) = p.beta1 * (2.0 - p.mu) * xi2;
        b(1, 3) = -p.beta1;
        b(1, 5) = -p.alpha;
        b(2, 5) = -1.0;
    }
    return b;
}

} // namespace

CubicCoeffs characteristic_cubic(const PhysicalParams& params, double xi_norm) {
    params.validate();
    if (!(xi_norm > 0.0))
        throw ConfigError("xi_norm",
                          "degenerate symbol: at xi = 0 the determinant is lambda^3");
    CubicCoeffs c;
    c.a = params.beta / params.rho0;
    c.b = (params.alpha * params.alpha + params.beta1 * params.rho0) /
          (params.rho0 * params.rho1);
    c.c = params.beta * params.beta1 / (params.rho0 * params.rho1);
    return c;
}

bool hurwitz_stable(const CubicCoeffs& coeffs) {
    check_positive_coeffs(coeffs, "hurwitz_stable");
    return coeffs.routh_condition();
}

std::array<Complex, 3> cubic_roots(const CubicCoeffs& coeffs) {
    const double a = coeffs.a, b = coeffs.b, c = coeffs.c;
    // Depressed form z = y - a/3, y^3 + p y + q.
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;

    std::array<Complex, 3> roots;
    if (std::abs(p) < 1e-300 && std::abs(q) < 1e-300) {
        roots.fill(Complex(-a / 3.0, 0.0));
    } else {
        const Complex disc = Complex(q * q / 4.0 + p * p * p / 27.0, 0.0);
        Complex u = std::pow(-Complex(q, 0.0) / 2.0 + std::sqrt(disc), 1.0 / 3.0);
        if (std::abs(u) < 1e-300)
            u = std::pow(-Complex(q, 0.0) / 2.0 - std::sqrt(disc), 1.0 / 3.0);
        const Complex v = -Complex(p, 0.0) / (3.0 * u);
        const Complex w(-0.5, std::sqrt(3.0) / 2.0);
        roots[0] = u + v - a / 3.0;
        roots[1] = w * u + std::conj(w) * v - a / 3.0;
        roots[2] = std::conj(w) * u + w * v - a / 3.0;
    }

    // One Newton step per root tightens the coefficient reconstruction.
    for (auto& z : roots) {
        const Complex f = ((z + a) * z + b) * z + c;
        const Complex df = (3.0 * z + 2.0 * a) * z + b;
        if (std::abs(df) > 1e-8 * (std::abs(z) * std::abs(z) + 1.0)) z -= f / df;
    }
    std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return roots;
}

Complex principal_determinant(const PhysicalParams& params, const SymbolPoint& pt) {
    const double n2 = pt.xi.squaredNorm();
    CubicCoeffs c;
    c.a = params.beta / params.rho0;
    c.b = (params.alpha * params.alpha + params.beta1 * params.rho0) /
          (params.rho0 * params.rho1);
    c.c = params.beta * params.beta1 / (params.rho0 * params.rho1);
    const Complex l = pt.lambda;
    return ((l + c.a * n2) * l + c.b * n2 * n2) * l + c.c * n2 * n2 * n2;
}

EllipticityScan ellipticity_scan(const PhysicalParams& params, int grid_density) {
    params.validate();
    if (grid_density < 8)
        throw UsageError("ellipticity_scan: grid_density must be at least 8");
    const int d = grid_density;

    EllipticityScan out;
    out.min_abs_det = std::numeric_limits<double>::infinity();
    out.slice.reserve(static_cast<size_t>(d) * d);
    for (int it = 0; it < d; ++it) {
        const double t = double(it) / (d - 1); // |lambda| = t, |xi|^2 = 1 - t
        const double xi_norm = std::sqrt(1.0 - t);
        for (int ip = 0; ip < d; ++ip) {
            const double phi = -M_PI / 2.0 + M_PI * double(ip) / (d - 1);
            const Complex lambda = t * Complex(std::cos(phi), std::sin(phi));
            for (int ia = 0; ia < d; ++ia) {
                const double psi = 2.0 * M_PI * double(ia) / d;
                SymbolPoint pt;
                pt.lambda = lambda;
                pt.xi = xi_norm * Eigen::Vector2d(std::cos(psi), std::sin(psi));
                const double val = std::abs(principal_determinant(params, pt));
                if (val < out.min_abs_det) {
                    out.min_abs_det = val;
                    out.argmin = pt;
                }
                if (ia == 0)
                    out.slice.push_back({lambda.real(), lambda.imag(), pt.xi[0],
                                         pt.xi[1], val});
            }
        }
    }
    return out;
}

Eigen::Matrix3cd ls_matrix(const LsProblem& problem) {
    const PhysicalParams& p = problem.params;
    p.validate();
    Complex lambda = problem.lambda;
    const double xi1 = problem.xi1;
    if (lambda.real() < 0.0)
        throw UsageError("ls_matrix: lambda must lie in the closed right half-plane");
    if (std::abs(lambda) == 0.0 && xi1 == 0.0)
        throw UsageError("ls_matrix: (xi1, lambda) = (0, 0) is excluded");
    // On the boundary Re lambda = 0 the stable/unstable split can degenerate;
    // a one-sided shift into the open half-plane keeps the 3/3 split.
    if (lambda.real() < 1e-12 * (std::abs(lambda) + 1.0)) lambda += 1e-8;

    const Eigen::Matrix<Complex, 6, 6> sys = companion_system(p, xi1, lambda);
    const Eigen::Matrix<Complex, 6, 3> stable = stable_subspace(sys);
    const Eigen::Matrix<Complex, 3, 6> rows =
        boundary_functionals(p, xi1, problem.bc_set);
    return rows * stable;
}

double lopatinskii_shapiro_check(const LsProblem& problem) {
    Eigen::Matrix3cd m = ls_matrix(problem);
    for (int j = 0; j < 3; ++j) {
        const double norm = m.col(j).norm();
        if (norm > 0.0) m.col(j) /= norm;
    }
    Eigen::JacobiSVD<Eigen::Matrix3cd> svd(m);
    return svd.singularValues().minCoeff();
}

} // namespace pmstab
