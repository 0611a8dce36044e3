// Test-side oracles, independent of the library's implementation paths.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace oracles {

// Roots of z^3 + a z^2 + b z + c via a companion-matrix eigensolve.
inline std::array<std::complex<double>, 3> companion_cubic_roots(double a, double b,
                                                                 double c) {
    Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    comp(0, 2) = -c;
    comp(1, 2) = -b;
    comp(2, 2) = -a;
    Eigen::EigenSolver<Eigen::Matrix3d> es(comp);
    std::array<std::complex<double>, 3> roots;
    for (int i = 0; i < 3; ++i) roots[i] = es.eigenvalues()[i];
    return roots;
}

// Polar mode Laplacian on monomials: lap_k r^j = (j^2 - k^2) r^(j-2).
// Coefficient vectors are indexed by the power of r.
inline std::vector<double> polar_lap_monomials(const std::vector<double>& coeffs,
                                               int k) {
    std::vector<double> out(coeffs.size(), 0.0);
    for (size_t j = 2; j < coeffs.size(); ++j)
        out[j - 2] += coeffs[j] * (double(j) * j - double(k) * k);
    if (coeffs.size() > 1 && coeffs[1] != 0.0 && k * k != 1) {
        // r^1 term maps to (1 - k^2) r^{-1}; only k = +-1 keeps it polynomial.
        out.resize(out.size());
        // handled by caller: tests use parity-consistent polynomials only.
    }
    return out;
}

inline double eval_monomials(const std::vector<double>& coeffs, double r) {
    double acc = 0.0, p = 1.0;
    for (double c : coeffs) {
        acc += c * p;
        p *= r;
    }
    return acc;
}

// First zeros of the Bessel function J0 by bisection on std::cyl_bessel_j.
inline std::vector<double> bessel_j0_zeros(int count) {
    std::vector<double> zeros;
    double a = 0.1;
    while (static_cast<int>(zeros.size()) < count) {
        double b = a + 0.05;
        while (std::cyl_bessel_j(0.0, a) * std::cyl_bessel_j(0.0, b) > 0.0) {
            a = b;
            b += 0.05;
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (std::cyl_bessel_j(0.0, a) * std::cyl_bessel_j(0.0, mid) <= 0.0)
                b = mid;
            else
                a = mid;
        }
        zeros.push_back(0.5 * (a + b));
        a = zeros.back() + 0.5;
    }
    return zeros;
}

// Cartesian second derivatives of a mode profile U(r) e^{ik theta} at angle
// theta, from its polar derivative values. Standard chain-rule conversion.
struct CartesianHessian {
    std::complex<double> uxx, uyy, uxy;
};
inline CartesianHessian cartesian_hessian(std::complex<double> u,
                                          std::complex<double> ur,
                                          std::complex<double> urr, int k, double r,
                                          double theta) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> phase = std::exp(i * double(k) * theta);
    const std::complex<double> utheta = i * double(k) * u;
    const std::complex<double> urtheta = i * double(k) * ur;
    const std::complex<double> uthetatheta = -double(k) * k * u;
    const double c = std::cos(theta), s = std::sin(theta);

    CartesianHessian h;
    h.uxx = (urr * c * c - 2.0 * urtheta * c * s / r + uthetatheta * s * s / (r * r) +
             ur * s * s / r + 2.0 * utheta * c * s / (r * r)) *
            phase;
    h.uyy = (urr * s * s + 2.0 * urtheta * c * s / r + uthetatheta * c * c / (r * r) +
             ur * c * c / r - 2.0 * utheta * c * s / (r * r)) *
            phase;
    h.uxy = (urr * c * s + urtheta * (c * c - s * s) / r - uthetatheta * c * s / (r * r) -
             ur * c * s / r - utheta * (c * c - s * s) / (r * r)) *
            phase;
    return h;
}

} // namespace oracles
