#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "pmstab/operator.hpp"

namespace pmstab {

// Eigenvalues of the reduced generator, sorted by descending real part
// (then imaginary part). Cached on the operator.
const Eigen::VectorXcd& spectrum(const ModeOperator& op);

// max Re over the spectrum.
double spectral_abscissa(const ModeOperator& op);

// Abscissa per mode k = 0..k_max at resolution n (same radial count on both
// subdomains).
std::vector<double> spectral_abscissa_profile(const PhysicalParams& params,
                                              const Geometry& geometry, int k_max,
                                              int n);

// ||(lambda - A_red)^{-1}|| in the energy metric (the reduced basis is
// orthonormal, so this is the plain smallest singular value, inverted).
// Throws if lambda is within 1e-12 of a computed eigenvalue.
double resolvent_norm(const ModeOperator& op, std::complex<double> lambda);

// Scan of sup_k ||(i y - A_red^(k))^{-1}|| over a log-spaced grid of
// frequencies, augmented with refined samples at detected resonance peaks
// (the refinement evaluates the scan function at the eigenfrequencies inside
// each peak bracket, which is where the local maximum actually sits).
struct ResolventScan {
    std::vector<double> lambdas;
    std::vector<double> norms;
    std::vector<int> per_mode;
};
ResolventScan resolvent_scan(const std::vector<ModeOperator>& ops, double lambda_min,
                             double lambda_max, int points_per_decade,
                             bool refine_peaks = true);

// Least-squares power-law fit of the scan envelope: slope of log10(norm)
// against log10(lambda) over the interior local maxima; falls back to all
// samples when the scan is smooth (no interior maxima). One or two isolated
// peaks give no usable trend and mark the fit inconclusive.
struct GrowthFit {
    double r_est = 0.0;
    double r_stderr = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // RMS of log10 residuals (decades)
    int n_peaks = 0;
    bool used_peaks = false;
    bool inconclusive = false;
};
GrowthFit growth_exponent_fit(const ResolventScan& scan);

// Initial-data presets: fixed closed-form radial profiles (see README),
// applied per simulated mode with a 1/(1+k^2) amplitude taper.
enum class Preset { plate_bump, membrane_bump, thermal_spot, mixed };

struct EvolveOptions {
    std::vector<int> modes = {0};
    Preset preset = Preset::mixed;
    double amplitude = 1.0;
    double t_final = 50.0;
    double dt = 0.01;
    int n_annulus = 32;
    int n_disk = 32;
    SystemKind kind = SystemKind::full;
    bool smooth_by_inverse = false;  // premultiply data by A_red^{-1}
    // Drop eigencomponents with |lambda| above this before stepping (0 = keep
    // all). The midpoint rule is A-stable but not L-stable: unresolved fast
    // modes neither decay nor make sense at step size dt, so order studies
    // and decay fits use band-limited data.
    double frequency_cutoff = 0.0;
};

// Implicit-midpoint trajectory; energies E(t) = 0.5 ||w||_H^2 summed over the
// simulated modes, dissipation integral accumulated by the trapezoid rule on
// the endpoint states.
struct EnergyTrajectory {
    std::vector<double> times;
    std::vector<double> energies;
    std::vector<double> dissipation_integral;
};
EnergyTrajectory evolve(const PhysicalParams& params, const Geometry& geometry,
                        const EvolveOptions& options);

// Decay-model fits on a trajectory tail t >= t_min: algebraic E ~ C t^-gamma
// against exponential E ~ C e^{-omega t}, compared by R^2 in log space.
struct DecayFit {
    double gamma = 0.0;       // algebraic exponent
    double gamma_stderr = 0.0;
    double omega = 0.0;       // exponential rate
    double r2_algebraic = 0.0;
    double r2_exponential = 0.0;
    double r_hat = 0.0;       // implied resolvent growth rate 2/gamma
    bool exponential_better = false;
    bool inconclusive = false; // window shorter than one decade
};
DecayFit fit_decay(const EnergyTrajectory& trajectory, double t_min);

// Evolves smoothed data (A_red^{-1} applied) and fits the decay tail.
DecayFit polynomial_decay_probe(const PhysicalParams& params,
                                const Geometry& geometry, EvolveOptions options);

enum class StabilityVerdict { exponential, polynomial_evidence, inconclusive };
const char* to_string(StabilityVerdict verdict);

// Deterministic verdict rules: "exponential" needs a uniform abscissa bound
// <= -1e-3 and an envelope slope <= 0.1; "polynomial_evidence" needs the
// abscissa tail (k >= 4) nondecreasing toward zero and an envelope slope
// >= 0.25 with residual <= 0.15.
struct StabilityReport {
    std::vector<double> spectral_abscissa_per_mode;
    GrowthFit growth;
    StabilityVerdict verdict = StabilityVerdict::inconclusive;
};
StabilityVerdict classify(const std::vector<int>& ks,
                          const std::vector<double>& abscissa, const GrowthFit& fit);

} // namespace pmstab
