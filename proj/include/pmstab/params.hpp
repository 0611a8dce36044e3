#pragma once

#include <array>

#include "pmstab/errors.hpp"

namespace pmstab {

// Model constants. alpha couples plate deflection and temperature, beta is
// the heat conductivity, beta1/beta2 the plate/membrane stiffnesses,
// rho0/rho1/rho2 the thermal/plate/membrane densities, sigma a zero-order
// heat sink, m the strain-rate (Kelvin-Voigt) damping in the membrane,
// kappa the Robin cooling coefficient and mu the Poisson ratio.
struct PhysicalParams {
    double alpha = 1.0;
    double beta  = 1.0;
    double beta1 = 1.0;
    double beta2 = 1.0;
    double rho0  = 1.0;
    double rho1  = 1.0;
    double rho2  = 1.0;
    double sigma = 1.0;
    double m     = 0.0;
    double kappa = 1.0;
    double mu    = 0.3;

    // Throws ConfigError naming the first violated field.
    void validate() const;
};

// Concentric geometry: membrane disk r < r_in, plate annulus r_in < r < r_out,
// both centred at the origin. The outward normal of the annulus is +r_hat on
// the outer circle and -r_hat on the interface circle.
struct Geometry {
    double r_in  = 1.0;
    double r_out = 2.0;

    void validate() const;
};

inline void PhysicalParams::validate() const {
    const std::array<std::pair<const char*, double>, 8> positive = {{
        {"alpha", alpha}, {"beta", beta}, {"beta1", beta1}, {"beta2", beta2},
        {"rho0", rho0}, {"rho1", rho1}, {"rho2", rho2}, {"kappa", kappa},
    }};
    for (const auto& [name, value] : positive) {
        if (!(value > 0.0))
            throw ConfigError(name, "must be > 0");
    }
    if (!(sigma >= 0.0)) throw ConfigError("sigma", "must be >= 0");
    if (!(m >= 0.0)) throw ConfigError("m", "must be >= 0");
    if (!(mu > 0.0 && mu < 0.5))
        throw ConfigError("mu", "Poisson ratio must lie in the open interval (0, 1/2)");
}

inline void Geometry::validate() const {
    if (!(r_in > 0.0)) throw ConfigError("r_in", "must be > 0");
    if (!(r_out > r_in)) throw ConfigError("r_out", "must exceed r_in");
}

} // namespace pmstab
