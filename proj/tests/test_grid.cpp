#include <doctest.h>
#include <random>

#include "oracles.hpp"
#include "pmstab/errors.hpp"
#include "pmstab/grid.hpp"

using namespace pmstab;

namespace {
const Geometry kGeom; // r_in = 1, r_out = 2
}

TEST_CASE("differentiation matrices are exact on polynomials") {
    const ModeGrid g = build_mode_grid(kGeom, 0, 24, 24);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    std::vector<double> coeffs(20);
    for (auto& c : coeffs) c = u(rng);
    Eigen::VectorXd f(24), df(24);
    for (int i = 0; i < 24; ++i) {
        const double r = g.annulus.nodes[i];
        double acc = 0, dacc = 0, p = 1;
        for (size_t j = 0; j < coeffs.size(); ++j) {
            acc += coeffs[j] * p;
            if (j + 1 < coeffs.size()) dacc += coeffs[j + 1] * (j + 1) * p;
            p *= r;
        }
        f[i] = acc;
        df[i] = dacc;
    }
    CHECK((g.annulus.d[0] * f - df).cwiseAbs().maxCoeff() < 1e-10);

    // d2 r^2 = 2 everywhere
    Eigen::VectorXd r2 = g.annulus.nodes.cwiseProduct(g.annulus.nodes);
    CHECK(((g.annulus.d[1] * r2).array() - 2.0).abs().maxCoeff() < 1e-10);
}

TEST_CASE("spectral accuracy of d1 on exp(r)") {
    double prev = 1e300;
    for (int n : {8, 12, 16, 24}) {
        const ModeGrid g = build_mode_grid(kGeom, 0, n, std::max(n, 8));
        Eigen::VectorXd f(n), df(n);
        for (int i = 0; i < n; ++i) f[i] = df[i] = std::exp(g.annulus.nodes[i]);
        const double err = (g.annulus.d[0] * f - df).cwiseAbs().maxCoeff();
        if (prev > 1e-12) CHECK(err < prev);
        if (n == 24) CHECK(err < 1e-8);
        prev = err;
    }
}

TEST_CASE("quadrature integrates areas and polynomial moments") {
    const ModeGrid g = build_mode_grid(kGeom, 0, 32, 32);
    CHECK(g.annulus.quad.sum() ==
          doctest::Approx(M_PI * (4.0 - 1.0)).epsilon(1e-12));
    CHECK(g.disk.quad.sum() == doctest::Approx(M_PI).epsilon(1e-12));

    // int r^2 over the annulus area element = 2 pi (r_out^4 - r_in^4)/4
    Eigen::VectorXd r2 = g.annulus.nodes.cwiseProduct(g.annulus.nodes);
    CHECK(g.annulus.quad.dot(r2) ==
          doctest::Approx(2.0 * M_PI * 15.0 / 4.0).epsilon(1e-12));
    // even moment on the disk
    Eigen::VectorXd d2 = g.disk.nodes.cwiseProduct(g.disk.nodes);
    CHECK(g.disk.quad.dot(d2) == doctest::Approx(2.0 * M_PI / 4.0).epsilon(1e-12));
}

TEST_CASE("mode Laplacian matches the monomial oracle") {
    // lap_k r^j = (j^2 - k^2) r^(j-2)
    struct Case {
        int k;
        std::vector<double> poly; // power coefficients
    };
    for (const Case& c : {Case{0, {0, 0, 1}},          // r^2 -> 4
                          Case{1, {0, 1}},             // r -> 0
                          Case{2, {0, 0, 0, 0, 1}}}) { // r^4 -> 12 r^2
        const ModeGrid g = build_mode_grid(kGeom, c.k, 24, 24);
        const Eigen::MatrixXd lap = laplacian_k(g, Domain::annulus);
        const std::vector<double> expected = oracles::polar_lap_monomials(c.poly, c.k);
        Eigen::VectorXd f(24), ef(24);
        for (int i = 0; i < 24; ++i) {
            f[i] = oracles::eval_monomials(c.poly, g.annulus.nodes[i]);
            ef[i] = oracles::eval_monomials(expected, g.annulus.nodes[i]);
        }
        CHECK((lap * f - ef).cwiseAbs().maxCoeff() < 1e-8);
    }

    // disk, k = 3: r^3 is harmonic
    const ModeGrid g3 = build_mode_grid(kGeom, 3, 32, 32);
    const Eigen::MatrixXd lap3 = laplacian_k(g3, Domain::disk);
    Eigen::VectorXd f3(32);
    for (int i = 0; i < 32; ++i) f3[i] = std::pow(g3.disk.nodes[i], 3);
    CHECK((lap3 * f3).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("bilaplacian on the annulus") {
    const ModeGrid g = build_mode_grid(kGeom, 0, 32, 32);
    const Eigen::MatrixXd bilap = bilaplacian_k(g);

    Eigen::VectorXd r4(32), r2(32);
    for (int i = 0; i < 32; ++i) {
        r4[i] = std::pow(g.annulus.nodes[i], 4);
        r2[i] = g.annulus.nodes[i] * g.annulus.nodes[i];
    }
    // lap^2 r^4 = 64; the matrix-product assembly has a roundoff floor well
    // above exact arithmetic, so the tolerance is loose in absolute terms.
    CHECK(((bilap * r4).array() - 64.0).abs().maxCoeff() < 1e-2);
    CHECK((bilap * r2).cwiseAbs().maxCoeff() < 1e-2);

    // k = 1: r^3 e^{i theta} is biharmonic
    const ModeGrid g1 = build_mode_grid(kGeom, 1, 32, 32);
    Eigen::VectorXd r3(32);
    for (int i = 0; i < 32; ++i) r3[i] = std::pow(g1.annulus.nodes[i], 3);
    CHECK((bilaplacian_k(g1) * r3).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("disk parity folding") {
    // even k: even polynomials differentiate exactly; odd k: odd ones
    const ModeGrid ge = build_mode_grid(kGeom, 2, 24, 24);
    Eigen::VectorXd f(24), df(24);
    for (int i = 0; i < 24; ++i) {
        const double r = ge.disk.nodes[i];
        f[i] = 3.0 * r * r - r * r * r * r;
        df[i] = 6.0 * r - 4.0 * r * r * r;
    }
    CHECK((ge.disk.d[0] * f - df).cwiseAbs().maxCoeff() < 1e-10);

    const ModeGrid go = build_mode_grid(kGeom, 3, 24, 24);
    for (int i = 0; i < 24; ++i) {
        const double r = go.disk.nodes[i];
        f[i] = r - 2.0 * r * r * r;
        df[i] = 1.0 - 6.0 * r * r;
    }
    CHECK((go.disk.d[0] * f - df).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("boundary rows") {
    const ModeGrid g = build_mode_grid(kGeom, 0, 32, 32);

    // B1 on r^2 at the interface with mu = 0.3: 2 + 0.3 * (-1) * (-2) = 2.6
    BoundaryRow b1 = boundary_rows(g, BoundaryWhich::b1_interface, {.mu = 0.3});
    Eigen::VectorXd r2(32);
    for (int i = 0; i < 32; ++i) r2[i] = g.annulus.nodes[i] * g.annulus.nodes[i];
    CHECK(b1.annulus.dot(r2) == doctest::Approx(2.6).epsilon(1e-9));

    // B1 of a constant vanishes
    CHECK(b1.annulus.dot(Eigen::VectorXd::Ones(32)) == doctest::Approx(0.0));

    // continuity row annihilates matching traces
    BoundaryRow cont = boundary_rows(g, BoundaryWhich::continuity_interface);
    Eigen::VectorXd ua = Eigen::VectorXd::Constant(32, 1.25);
    Eigen::VectorXd vd = Eigen::VectorXd::Constant(32, 1.25);
    CHECK(std::abs(cont.annulus.dot(ua) + cont.disk.dot(vd)) < 1e-14);

    // Robin rows need kappa; plate rows need mu
    CHECK_THROWS_AS(boundary_rows(g, BoundaryWhich::robin_gamma), UsageError);
    CHECK_THROWS_AS(boundary_rows(g, BoundaryWhich::b2_interface), UsageError);

    // normal derivative points into the disk on both sides of the interface
    BoundaryRow nu = boundary_rows(g, BoundaryWhich::normal_derivative_interface);
    Eigen::VectorXd lin_a = g.annulus.nodes;
    Eigen::VectorXd lin_d = g.disk.nodes.cwiseProduct(g.disk.nodes);
    CHECK(nu.annulus.dot(lin_a) == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(nu.disk.dot(lin_d) == doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("polar and Cartesian forms of the first plate operator agree") {
    const double mu = 0.3;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k : {0, 1, 2, 4}) {
        const ModeGrid g = build_mode_grid(kGeom, k, 24, 24);
        const BoundaryRow row = boundary_rows(g, BoundaryWhich::b1_interface, {.mu = mu});
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> poly(8);
            for (auto& c : poly) c = u(rng);
            Eigen::VectorXd f(24);
            for (int i = 0; i < 24; ++i)
                f[i] = oracles::eval_monomials(poly, g.annulus.nodes[i]);
            const double polar_value = row.annulus.dot(f);

            // Cartesian: B1 u = Delta u + (1 - mu)(2 n1 n2 u_xy - n1^2 u_yy
            // - n2^2 u_xx), nu = -r_hat on the interface.
            const double r = kGeom.r_in;
            double uval = 0, ur = 0, urr = 0;
            {
                double p = 1;
                for (size_t j = 0; j < poly.size(); ++j) {
                    uval += poly[j] * p;
                    if (j >= 1) ur += poly[j] * j * std::pow(r, j - 1);
                    if (j >= 2) urr += poly[j] * j * (j - 1) * std::pow(r, j - 2);
                    p *= r;
                }
            }
            for (int t = 0; t < 8; ++t) {
                const double theta = 2.0 * M_PI * t / 8.0 + 0.1;
                const auto h = oracles::cartesian_hessian(uval, ur, urr, k, r, theta);
                const double n1 = -std::cos(theta), n2 = -std::sin(theta);
                const std::complex<double> lap = h.uxx + h.uyy;
                const std::complex<double> b1_cart =
                    lap + (1.0 - mu) * (2.0 * n1 * n2 * h.uxy - n1 * n1 * h.uyy -
                                        n2 * n2 * h.uxx);
                const std::complex<double> phase =
                    std::exp(std::complex<double>(0, 1) * double(k) * theta);
                CHECK(std::abs(b1_cart - polar_value * phase) < 1e-8);
            }
        }
    }
}

TEST_CASE("trace inequality constant is stable under refinement") {
    // ||u||_{L2(boundary)}^2 <= C ||u||_H1 ||u||_L2 for band-limited samples;
    // the fitted C must move by less than 20% when n doubles.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto fitted_constant = [&](int n, std::mt19937_64 gen) {
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const int k = static_cast<int>(std::abs(u(gen)) * 5);
            const ModeGrid g = build_mode_grid(kGeom, k, n, 8);
            Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
            std::vector<double> coeffs(11);
            for (auto& c : coeffs) c = u(gen);
            for (int i = 0; i < n; ++i) {
                const double s =
                    (2.0 * g.annulus.nodes[i] - 3.0) / 1.0; // map to [-1, 1]
                double acc = 0;
                for (size_t m = 0; m < coeffs.size(); ++m)
                    acc += coeffs[m] * std::cos(m * std::acos(std::clamp(s, -1.0, 1.0)));
                f[i] = acc;
            }
            const double l2 = f.dot(g.mass_a * f);
            const double h1 = l2 + f.dot(g.grad_a * f);
            const double bdry = 2.0 * M_PI * (kGeom.r_out * f[0] * f[0] +
                                              kGeom.r_in * f[n - 1] * f[n - 1]);
            worst = std::max(worst, bdry / std::sqrt(h1 * l2));
        }
        return worst;
    };
    const double c32 = fitted_constant(32, rng);
    const double c64 = fitted_constant(64, rng);
    CHECK(std::abs(c32 - c64) <= 0.2 * std::max(c32, c64));
}

TEST_CASE("geometric condition scan") {
    GcScanResult centred = geometric_condition_scan(kGeom, {0.0, 0.0});
    CHECK(centred.min == doctest::Approx(-1.0));
    CHECK(centred.max == doctest::Approx(-1.0));
    CHECK(centred.satisfied());

    GcScanResult far = geometric_condition_scan(kGeom, {2.0, 0.0});
    CHECK(far.min == doctest::Approx(-3.0));
    CHECK(far.max == doctest::Approx(1.0));
    CHECK_FALSE(far.satisfied());

    GcScanResult half = geometric_condition_scan(kGeom, {0.5, 0.0});
    CHECK(half.max == doctest::Approx(-0.5));
    CHECK(half.satisfied());
}

TEST_CASE("grid construction errors") {
    CHECK_THROWS_AS(build_mode_grid(kGeom, 0, 4, 32), ConfigError);
    Geometry bad;
    bad.r_in = 2.0;
    bad.r_out = 1.0;
    CHECK_THROWS_AS(build_mode_grid(bad, 0, 32, 32), ConfigError);
}
