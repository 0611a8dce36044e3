#include <doctest.h>
#include <random>

#include "oracles.hpp"
#include "pmstab/errors.hpp"
#include "pmstab/symbols.hpp"

using namespace pmstab;

TEST_CASE("characteristic cubic coefficients") {
    PhysicalParams pm;
    const CubicCoeffs unit = characteristic_cubic(pm, 1.0);
    CHECK(unit.a == doctest::Approx(1.0));
    CHECK(unit.b == doctest::Approx(2.0));
    CHECK(unit.c == doctest::Approx(1.0));
    CHECK(unit.routh_condition());

    // (rho0, rho1, beta, beta1, alpha) = (2, 1, 1, 1, 1): exact fractions
    // a = 1/2, b = (1 + 2)/2 = 3/2, c = 1/2, checked in rational arithmetic.
    PhysicalParams pm2 = pm;
    pm2.rho0 = 2.0;
    const CubicCoeffs c2 = characteristic_cubic(pm2, 0.7);
    CHECK(c2.a == 0.5);
    CHECK(c2.b == 1.5);
    CHECK(c2.c == 0.5);
    CHECK(c2.a * c2.b > c2.c);

    CHECK_THROWS_AS(characteristic_cubic(pm, 0.0), ConfigError);
    PhysicalParams bad = pm;
    bad.beta = -1.0;
    CHECK_THROWS_AS(characteristic_cubic(bad, 1.0), ConfigError);
}

TEST_CASE("Routh criterion against companion eigensolve oracle") {
    CHECK(hurwitz_stable({2, 1, 1}));
    for (const auto& root : oracles::companion_cubic_roots(2, 1, 1))
        CHECK(root.real() < 0.0);
    CHECK_FALSE(hurwitz_stable({1, 1, 1})); // boundary case ab = c
    CHECK(hurwitz_stable({1, 2, 1}));
    CHECK_THROWS_AS(hurwitz_stable({0.0, 1.0, 1.0}), ConfigError);

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> logu(-2.0, 2.0);
    int mismatches = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const double a = std::pow(10.0, logu(rng));
        const double b = std::pow(10.0, logu(rng));
        const double c = std::pow(10.0, logu(rng));
        if (a * b == c) continue;
        const bool predicted = hurwitz_stable({a, b, c});
        double max_re = -1e300;
        for (const auto& root : oracles::companion_cubic_roots(a, b, c))
            max_re = std::max(max_re, root.real());
        const bool oracle = max_re < 0.0;
        if (predicted != oracle) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("cubic roots: factorizations, sorting, reconstruction") {
    const auto r1 = cubic_roots({1, 1, 1}); // (z + 1)(z^2 + 1)
    CHECK(std::abs(r1[0] - Complex(-1, 0)) < 1e-12);
    CHECK(std::abs(r1[1] - Complex(0, -1)) < 1e-12);
    CHECK(std::abs(r1[2] - Complex(0, 1)) < 1e-12);

    const auto r2 = cubic_roots({3, 3, 1}); // (z + 1)^3
    for (const auto& z : r2) CHECK(std::abs(z - Complex(-1, 0)) < 2e-5);

    const auto r3 = cubic_roots({1, 2, 1});
    for (const auto& z : r3) CHECK(z.real() < 0.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> logu(-2.0, 2.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const double a = std::pow(10.0, logu(rng));
        const double b = std::pow(10.0, logu(rng));
        const double c = std::pow(10.0, logu(rng));
        const auto roots = cubic_roots({a, b, c});
        // expand prod (z - r_i) and compare coefficients
        const Complex s1 = roots[0] + roots[1] + roots[2];
        const Complex s2 =
            roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2];
        const Complex s3 = roots[0] * roots[1] * roots[2];
        const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1.0});
        CHECK(std::abs(-s1 - a) <= 1e-10 * scale);
        CHECK(std::abs(s2 - b) <= 1e-10 * scale);
        CHECK(std::abs(-s3 - c) <= 1e-10 * scale);

        // at least one negative real root always exists
        bool has_negative_real = false;
        for (const auto& z : roots)
            if (std::abs(z.imag()) < 1e-8 * (std::abs(z) + 1) && z.real() < 0.0)
                has_negative_real = true;
        CHECK(has_negative_real);

        // sign of max Re vs the Routh condition; no imaginary roots off the
        // boundary ab = c
        double max_re = -1e300, min_abs_re = 1e300;
        for (const auto& z : roots) {
            max_re = std::max(max_re, z.real());
            min_abs_re = std::min(min_abs_re, std::abs(z.real()));
        }
        if (std::abs(a * b - c) > 1e-6 * scale) {
            CHECK((a * b > c) == (max_re < 0.0));
            CHECK(min_abs_re > 0.0);
        }
    }
}

TEST_CASE("principal symbol determinant spot values") {
    PhysicalParams pm;
    SymbolPoint p1{Complex(0, 1), Eigen::Vector2d(0, 0)};
    CHECK(std::abs(principal_determinant(pm, p1)) == doctest::Approx(1.0));
    SymbolPoint p2{Complex(0, 0), Eigen::Vector2d(1, 0)};
    CHECK(std::abs(principal_determinant(pm, p2)) == doctest::Approx(1.0)); // c = 1
    PhysicalParams pm2 = pm;
    pm2.rho1 = 4.0;
    SymbolPoint p3{Complex(0, 0), Eigen::Vector2d(0, 1)};
    CHECK(std::abs(principal_determinant(pm2, p3)) == doctest::Approx(0.25));
}

TEST_CASE("ellipticity scan: positive minimum and quasi-homogeneity") {
    PhysicalParams pm;
    const EllipticityScan scan = ellipticity_scan(pm, 24);
    CHECK(scan.min_abs_det > 1e-6);
    CHECK(scan.slice.size() == 24u * 24u);
    CHECK_THROWS_AS(ellipticity_scan(pm, 4), UsageError);

    // |det(t^2 lambda, t xi)| = t^6 |det(lambda, xi)| at t = 2
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        SymbolPoint p;
        p.lambda = Complex(std::abs(u(rng)), u(rng));
        p.xi << u(rng), u(rng);
        SymbolPoint scaled;
        scaled.lambda = 4.0 * p.lambda;
        scaled.xi = 2.0 * p.xi;
        const double lhs = std::abs(principal_determinant(pm, scaled)) / 64.0;
        const double rhs = std::abs(principal_determinant(pm, p));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("Lopatinskii-Shapiro check: examples, grid, scale invariance") {
    PhysicalParams pm;
    CHECK(lopatinskii_shapiro_check({pm, 1.0, Complex(1, 0),
                                     LsBoundarySet::clamped_robin}) > 0.0);
    CHECK(lopatinskii_shapiro_check({pm, 0.0, Complex(0, 1),
                                     LsBoundarySet::free_robin}) > 0.0);

    // column scaling does not change the verdict nor the normalized value
    const LsProblem probe{pm, 0.7, Complex(0.3, 0.4), LsBoundarySet::free_robin};
    Eigen::Matrix3cd m = ls_matrix(probe);
    Eigen::Matrix3cd scaled = 2.0 * m;
    for (Eigen::Matrix3cd* mat : {&m, &scaled})
        for (int j = 0; j < 3; ++j) mat->col(j) /= mat->col(j).norm();
    Eigen::JacobiSVD<Eigen::Matrix3cd> s1(m), s2(scaled);
    CHECK(s1.singularValues().minCoeff() ==
          doctest::Approx(s2.singularValues().minCoeff()).epsilon(1e-12));

    // normalized slice |lambda| + xi1^2 = 1, both boundary sets
    for (LsBoundarySet set :
         {LsBoundarySet::clamped_robin, LsBoundarySet::free_robin}) {
        double min_sv = 1e300;
        const int g = 16;
        for (int i = 0; i < g; ++i) {
            const double xi1 = -1.0 + 2.0 * i / (g - 1);
            for (int j = 0; j < g; ++j) {
                const double phi = -M_PI / 2 + M_PI * j / (g - 1);
                const Complex lambda =
                    (1.0 - xi1 * xi1) * Complex(std::cos(phi), std::sin(phi));
                min_sv = std::min(min_sv,
                                  lopatinskii_shapiro_check({pm, xi1, lambda, set}));
            }
        }
        CHECK(min_sv > 1e-8);
    }

    CHECK_THROWS_AS(lopatinskii_shapiro_check(
                        {pm, 0.0, Complex(0, 0), LsBoundarySet::clamped_robin}),
                    UsageError);
    CHECK_THROWS_AS(lopatinskii_shapiro_check(
                        {pm, 1.0, Complex(-1, 0), LsBoundarySet::clamped_robin}),
                    UsageError);
}
