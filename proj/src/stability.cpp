#include "pmstab/stability.hpp"

#include <algorithm>
#include <cmath>

#include "pmstab/colloc.hpp"
#include <set>

#include "pmstab/errors.hpp"

namespace pmstab {

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    double slope_stderr = 0.0;
    double r2 = 0.0;
};

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0;
    for (int i = 0; i < n; ++i) {
        const double e = y[i] - f.slope * x[i] - f.intercept;
        rss += e * e;
    }
    f.residual_rms = std::sqrt(rss / n);
    f.slope_stderr = (n > 2) ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
    f.r2 = (syy > 0) ? 1.0 - rss / syy : 1.0;
    return f;
}

// Fast per-mode resolvent-norm estimator: one Hessenberg reduction per mode,
// then each shift costs O(n^2) (Givens factorization of lambda*I - H plus an
// inverse power iteration, which converges immediately near resonances; on
// flat stretches clustered singular values slow it down, where accuracy
// matters least). Orthogonal invariance makes the Hessenberg norm equal the
// original one.
class ResolventEvaluator {
public:
    explicit ResolventEvaluator(const Eigen::MatrixXd& reduced)
        : h_(Eigen::HessenbergDecomposition<Eigen::MatrixXd>(reduced).matrixH()) {}

    double norm(std::complex<double> lambda) const {
        const int n = static_cast<int>(h_.rows());
        Eigen::MatrixXcd r = (-h_).cast<std::complex<double>>();
        r.diagonal().array() += lambda;

        // Givens QR of the Hessenberg shift: rotations act on rows (i, i+1).
        std::vector<std::complex<double>> ca(n - 1), cb(n - 1);
        for (int i = 0; i + 1 < n; ++i) {
            const std::complex<double> a = r(i, i), b = r(i + 1, i);
            const double mag = std::sqrt(std::norm(a) + std::norm(b));
            if (!(mag > 0.0))
                throw NumericalError("resolvent_norm", "exactly singular shift");
            ca[i] = std::conj(a) / mag;
            cb[i] = std::conj(b) / mag;
            for (int j = i; j < n; ++j) {
                const std::complex<double> x = r(i, j), y = r(i + 1, j);
                r(i, j) = ca[i] * x + cb[i] * y;
                r(i + 1, j) = -std::conj(cb[i]) * x + std::conj(ca[i]) * y;
            }
        }
        for (int i = 0; i < n; ++i)
            if (std::abs(r(i, i)) < 1e-300)
                return std::numeric_limits<double>::infinity();

        auto solve = [&](Eigen::VectorXcd v) { // (lambda - H) x = v
            for (int i = 0; i + 1 < n; ++i) {
                const std::complex<double> x = v[i], y = v[i + 1];
                v[i] = ca[i] * x + cb[i] * y;
                v[i + 1] = -std::conj(cb[i]) * x + std::conj(ca[i]) * y;
            }
            for (int i = n - 1; i >= 0; --i) {
                std::complex<double> acc = v[i];
                for (int j = i + 1; j < n; ++j) acc -= r(i, j) * v[j];
                v[i] = acc / r(i, i);
            }
            return v;
        };
        auto solve_adjoint = [&](Eigen::VectorXcd v) { // (lambda - H)^H x = v
            for (int i = 0; i < n; ++i) {
                std::complex<double> acc = v[i];
                for (int j = 0; j < i; ++j) acc -= std::conj(r(j, i)) * v[j];
                v[i] = acc / std::conj(r(i, i));
            }
            for (int i = n - 2; i >= 0; --i) {
                const std::complex<double> x = v[i], y = v[i + 1];
                v[i] = std::conj(ca[i]) * x - cb[i] * y;
                v[i + 1] = std::conj(cb[i]) * x + ca[i] * y;
            }
            return v;
        };

        Eigen::VectorXcd x = Eigen::VectorXcd::Ones(n) / std::sqrt(double(n));
        double est = 0.0;
        for (int it = 0; it < 100; ++it) {
            const Eigen::VectorXcd y = solve_adjoint(solve(x));
            const double norm = y.norm();
            if (!(norm > 0.0) || !std::isfinite(norm))
                return std::numeric_limits<double>::infinity();
            const double next = std::sqrt(norm);
            x = y / norm;
            if (it >= 4 && std::abs(next - est) <= 1e-10 * next) return next;
            est = next;
        }
        return est;
    }

private:
    Eigen::MatrixXd h_;
};

double screened_max_norm(const std::vector<ModeOperator>& ops,
                         const std::vector<ResolventEvaluator>& evals, double y,
                         int* argmax) {
    // Exact lower bound 1/dist(iy, spectrum) ranks the modes; modes whose
    // bound cannot reach the running maximum within a conservative
    // non-normality allowance are skipped.
    constexpr double kSafety = 50.0;
    const std::complex<double> lam(0.0, y);
    std::vector<std::pair<double, int>> bounds;
    bounds.reserve(ops.size());
    for (size_t i = 0; i < ops.size(); ++i) {
        const Eigen::VectorXcd& eigs = spectrum(ops[i]);
        double dist = std::numeric_limits<double>::infinity();
        for (int j = 0; j < eigs.size(); ++j)
            dist = std::min(dist, std::abs(lam - eigs[j]));
        bounds.emplace_back(1.0 / dist, static_cast<int>(i));
    }
    std::sort(bounds.begin(), bounds.end(), std::greater<>());
    double best = 0.0;
    int best_mode = bounds.front().second;
    for (const auto& [bound, idx] : bounds) {
        if (kSafety * bound < best) break;
        const double val = evals[idx].norm(lam);
        if (val > best) {
            best = val;
            best_mode = idx;
        }
    }
    if (argmax) *argmax = best_mode;
    return best;
}

} // namespace

const Eigen::VectorXcd& spectrum(const ModeOperator& op) {
    if (!op.eigenvalue_cache) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(op.reduced);
        if (es.info() != Eigen::Success)
            throw NumericalError("spectrum(k=" + std::to_string(op.k) + ")",
                                 "eigensolver failed");
        Eigen::VectorXcd eigs = es.eigenvalues();
        std::sort(eigs.data(), eigs.data() + eigs.size(),
                  [](std::complex<double> a, std::complex<double> b) {
                      if (a.real() != b.real()) return a.real() > b.real();
                      return a.imag() > b.imag();
                  });
        op.eigenvalue_cache = std::move(eigs);
    }
    return *op.eigenvalue_cache;
}

double spectral_abscissa(const ModeOperator& op) {
    return spectrum(op)[0].real();
}

std::vector<double> spectral_abscissa_profile(const PhysicalParams& params,
                                              const Geometry& geometry, int k_max,
                                              int n) {
    if (k_max < 8) throw UsageError("spectral_abscissa_profile: k_max must be >= 8");
    std::vector<double> out(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
        const ModeGrid grid = build_mode_grid(geometry, k, n, n);
        out[k] = spectral_abscissa(assemble(params, grid));
    }
    return out;
}

double resolvent_norm(const ModeOperator& op, std::complex<double> lambda) {
    const Eigen::VectorXcd& eigs = spectrum(op);
    double dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < eigs.size(); ++j)
        dist = std::min(dist, std::abs(lambda - eigs[j]));
    if (dist < 1e-12)
        throw NumericalError("resolvent_norm(k=" + std::to_string(op.k) + ")",
                             "lambda is within 1e-12 of an eigenvalue");
    const int n = static_cast<int>(op.reduced.rows());
    Eigen::MatrixXcd m = lambda * Eigen::MatrixXcd::Identity(n, n) -
                         op.reduced.cast<std::complex<double>>();
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    const double smin = svd.singularValues().minCoeff();
    if (!(smin > 0.0))
        throw NumericalError("resolvent_norm(k=" + std::to_string(op.k) + ")",
                             "singular shift");
    return 1.0 / smin;
}

ResolventScan resolvent_scan(const std::vector<ModeOperator>& ops, double lambda_min,
                             double lambda_max, int points_per_decade,
                             bool refine_peaks) {
    if (ops.empty()) throw UsageError("resolvent_scan: no modes");
    if (!(lambda_min > 0.0 && lambda_max > lambda_min))
        throw UsageError("resolvent_scan: need 0 < lambda_min < lambda_max");

    std::vector<double> grid;
    const double decades = std::log10(lambda_max / lambda_min);
    const int npts = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
    for (int i = 0; i < npts; ++i)
        grid.push_back(lambda_min * std::pow(lambda_max / lambda_min, double(i) / (npts - 1)));

    std::vector<ResolventEvaluator> evals;
    evals.reserve(ops.size());
    for (const ModeOperator& op : ops) evals.emplace_back(op.reduced);

    std::vector<double> vals(grid.size());
    std::vector<int> modes(grid.size());
    for (size_t i = 0; i < grid.size(); ++i)
        vals[i] = screened_max_norm(ops, evals, grid[i], &modes[i]);

    std::set<double> extra;
    if (refine_peaks) {
        for (size_t i = 1; i + 1 < grid.size(); ++i) {
            if (!(vals[i] > vals[i - 1] && vals[i] > vals[i + 1])) continue;
            // The local maximum sits at a resonance; evaluate at the least
            // damped eigenfrequencies inside the bracket.
            std::vector<std::pair<double, double>> cand; // (|Re|, Im)
            for (const ModeOperator& op : ops) {
                const Eigen::VectorXcd& eigs = spectrum(op);
                for (int j = 0; j < eigs.size(); ++j) {
                    const double y = eigs[j].imag();
                    if (y > grid[i - 1] && y < grid[i + 1] && eigs[j].real() < 0.0 &&
                        std::abs(eigs[j].real()) < 0.1)
                        cand.emplace_back(std::abs(eigs[j].real()), y);
                }
            }
            std::sort(cand.begin(), cand.end());
            double best_val = -1.0, best_freq = 0.0;
            for (size_t c = 0; c < cand.size() && c < 8; ++c) {
                const double v = screened_max_norm(ops, evals, cand[c].second, nullptr);
                if (v > best_val) {
                    best_val = v;
                    best_freq = cand[c].second;
                }
            }
            if (best_val > 0.0) extra.insert(best_freq);
        }
    }

    ResolventScan scan;
    std::vector<std::pair<double, bool>> all; // (lambda, from_grid)
    for (double g : grid) all.emplace_back(g, true);
    for (double e : extra) all.emplace_back(e, false);
    std::sort(all.begin(), all.end());
    for (size_t i = 0; i < all.size(); ++i) {
        const double lam = all[i].first;
        if (!scan.lambdas.empty() && lam <= scan.lambdas.back() * (1.0 + 1e-12)) continue;
        int arg = 0;
        double val;
        if (all[i].second) {
            const size_t gi = std::lower_bound(grid.begin(), grid.end(), lam) - grid.begin();
            val = vals[gi];
            arg = modes[gi];
        } else {
            val = screened_max_norm(ops, evals, lam, &arg);
        }
        scan.lambdas.push_back(lam);
        scan.norms.push_back(val);
        scan.per_mode.push_back(ops[arg].k);
    }
    return scan;
}

GrowthFit growth_exponent_fit(const ResolventScan& scan) {
    const size_t n = scan.lambdas.size();
    if (n < 40)
        throw UsageError("growth_exponent_fit: need at least 40 scan samples");
    if (scan.lambdas.back() < scan.lambdas.front() * std::pow(10.0, 1.5))
        throw UsageError("growth_exponent_fit: scan must cover 1.5 decades");

    std::vector<size_t> maxima;
    for (size_t i = 1; i + 1 < n; ++i)
        if (scan.norms[i] > scan.norms[i - 1] && scan.norms[i] > scan.norms[i + 1])
            maxima.push_back(i);

    // Keep only the dominant peak within each 0.08-decade neighbourhood, so
    // minor secondary resonances do not blur the envelope.
    std::sort(maxima.begin(), maxima.end(),
              [&](size_t a, size_t b) { return scan.norms[a] > scan.norms[b]; });
    std::vector<size_t> peaks;
    for (size_t i : maxima) {
        bool shadowed = false;
        for (size_t j : peaks)
            if (std::abs(std::log10(scan.lambdas[i] / scan.lambdas[j])) < 0.08)
                shadowed = true;
        if (!shadowed) peaks.push_back(i);
    }
    std::sort(peaks.begin(), peaks.end());

    GrowthFit fit;
    fit.n_peaks = static_cast<int>(peaks.size());
    std::vector<double> xs, ys;
    if (peaks.size() >= 3) {
        fit.used_peaks = true;
        for (size_t i : peaks) {
            xs.push_back(std::log10(scan.lambdas[i]));
            ys.push_back(std::log10(scan.norms[i]));
        }
    } else {
        // Smooth scan: the samples are their own envelope. One or two
        // isolated resonances carry no usable trend.
        fit.inconclusive = (peaks.size() >= 1);
        for (size_t i = 0; i < n; ++i) {
            xs.push_back(std::log10(scan.lambdas[i]));
            ys.push_back(std::log10(scan.norms[i]));
        }
    }
    const LineFit line = least_squares_line(xs, ys);
    fit.r_est = line.slope;
    fit.r_stderr = line.slope_stderr;
    fit.intercept = line.intercept;
    fit.residual = line.residual_rms;
    return fit;
}

namespace {

constexpr int kPresetDegree = 24;

// Coefficients of the closed-form preset profiles in the block polynomial
// bases, by interpolation at Chebyshev points of the mapped variable. The
// disk fit divides out the odd-parity prefactor first.
BlockCoeffs preset_coeffs(const Geometry& geom, Preset preset, int k) {
    const int d = kPresetDegree;
    const double a = geom.r_in, b = geom.r_out;
    const double taper = 1.0 / (1.0 + double(k) * k);
    const int parity = std::abs(k) % 2;

    auto plate = [&](double r) {
        const double s = 16.0 / std::pow(b - a, 4);
        return s * (r - a) * (r - a) * (b - r) * (b - r);
    };
    auto membrane_even = [&](double r) { // even part; parity prefactor is in the basis
        const double q = 1.0 - (r / a) * (r / a);
        return q * q;
    };
    auto thermal = [&](double r) {
        const double rc = 0.5 * (a + b), s = (b - a) / 6.0;
        return std::exp(-((r - rc) / s) * ((r - rc) / s));
    };

    auto fit_annulus = [&](auto&& f) {
        Eigen::MatrixXd v(d + 1, d + 1);
        Eigen::VectorXd rhs(d + 1);
        for (int j = 0; j <= d; ++j) {
            const double s = std::cos(j * M_PI / d);
            const double r = 0.5 * (a + b) + 0.5 * (b - a) * s;
            for (int m = 0; m <= d; ++m) v(j, m) = colloc::chebyshev_t(m, s);
            rhs[j] = f(r);
        }
        return Eigen::VectorXcd(v.partialPivLu().solve(rhs).cast<std::complex<double>>());
    };
    auto fit_disk_even = [&](auto&& f) {
        Eigen::MatrixXd v(d + 1, d + 1);
        Eigen::VectorXd rhs(d + 1);
        for (int j = 0; j <= d; ++j) {
            const double t = std::cos((j + 0.5) * M_PI / (d + 1));
            const double r = a * std::sqrt(0.5 * (t + 1.0));
            for (int m = 0; m <= d; ++m) v(j, m) = colloc::chebyshev_t(m, t);
            rhs[j] = f(r);
        }
        return Eigen::VectorXcd(v.partialPivLu().solve(rhs).cast<std::complex<double>>());
    };

    BlockCoeffs c;
    for (auto& blk : c) blk = Eigen::VectorXcd::Zero(d + 1);
    const bool want_plate = preset == Preset::plate_bump || preset == Preset::mixed;
    const bool want_membrane = preset == Preset::membrane_bump || preset == Preset::mixed;
    const bool want_thermal = preset == Preset::thermal_spot || preset == Preset::mixed;
    const double thermal_weight = (preset == Preset::mixed) ? 0.5 : 1.0;
    if (want_plate) c[0] = taper * fit_annulus(plate);
    if (want_membrane) c[2] = taper * fit_disk_even(membrane_even);
    if (want_thermal) c[4] = taper * thermal_weight * fit_annulus(thermal);
    (void)parity;
    return c;
}

} // namespace

EnergyTrajectory evolve(const PhysicalParams& params, const Geometry& geometry,
                        const EvolveOptions& options) {
    if (!(options.dt > 0.0)) throw UsageError("evolve: dt must be positive");
    if (options.modes.empty()) throw UsageError("evolve: no modes requested");

    struct ModeState {
        ModeGrid grid;
        ModeOperator op;
        Eigen::PartialPivLU<Eigen::MatrixXd> stepper;
        Eigen::MatrixXd forward;
        Eigen::VectorXd x;
    };
    std::vector<ModeState> states;
    for (int k : options.modes) {
        ModeState st{build_mode_grid(geometry, k, options.n_annulus, options.n_disk),
                     {}, {}, {}, {}};
        st.op = assemble(params, st.grid, options.kind);
        const int nred = static_cast<int>(st.op.reduced.rows());
        const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(nred, nred);
        st.stepper.compute(eye - 0.5 * options.dt * st.op.reduced);
        st.forward = eye + 0.5 * options.dt * st.op.reduced;

        const ConstrainedStateBasis basis(params, geometry, k, kPresetDegree,
                                          options.kind);
        BlockCoeffs coeffs = preset_coeffs(geometry, options.preset, k);
        for (auto& block : coeffs) block *= options.amplitude;
        const StateVector w0 = basis.realize(basis.project(coeffs), st.grid);
        Eigen::VectorXd x0 = st.op.reduce(w0).real();
        if (options.smooth_by_inverse)
            x0 = Eigen::PartialPivLU<Eigen::MatrixXd>(st.op.reduced).solve(x0);
        if (options.frequency_cutoff > 0.0) {
            Eigen::EigenSolver<Eigen::MatrixXd> es(st.op.reduced);
            if (es.info() != Eigen::Success)
                throw NumericalError("evolve", "eigensolver failed in band filter");
            const Eigen::MatrixXcd v = es.eigenvectors();
            Eigen::VectorXcd c =
                Eigen::PartialPivLU<Eigen::MatrixXcd>(v).solve(x0.cast<std::complex<double>>());
            for (int i = 0; i < c.size(); ++i)
                if (std::abs(es.eigenvalues()[i]) > options.frequency_cutoff) c[i] = 0.0;
            x0 = (v * c).real();
        }
        st.x = x0;
        states.push_back(std::move(st));
    }

    auto total_energy = [&]() {
        double e = 0.0;
        for (const ModeState& st : states) e += 0.5 * st.x.squaredNorm();
        return e;
    };
    auto total_dissipation = [&]() {
        double d = 0.0;
        for (const ModeState& st : states) {
            StateVector w = st.op.lift(st.x.cast<std::complex<double>>());
            d += dissipation_rate(params, st.grid, w);
        }
        return d;
    };

    const int nsteps = static_cast<int>(std::llround(options.t_final / options.dt));
    EnergyTrajectory traj;
    traj.times.reserve(nsteps + 1);
    traj.energies.reserve(nsteps + 1);
    traj.dissipation_integral.reserve(nsteps + 1);
    traj.times.push_back(0.0);
    traj.energies.push_back(total_energy());
    traj.dissipation_integral.push_back(0.0);

    double d_prev = total_dissipation();
    double d_int = 0.0;
    for (int step = 1; step <= nsteps; ++step) {
        for (ModeState& st : states) {
            const Eigen::VectorXd rhs = st.forward * st.x;
            st.x = st.stepper.solve(rhs);
            if (!st.x.allFinite())
                throw NumericalError("evolve(k=" + std::to_string(st.op.k) + ")",
                                     "non-finite state (diverged step)");
        }
        const double d_now = total_dissipation();
        d_int += 0.5 * options.dt * (d_prev + d_now);
        d_prev = d_now;
        traj.times.push_back(step * options.dt);
        traj.energies.push_back(total_energy());
        traj.dissipation_integral.push_back(d_int);
    }
    return traj;
}

DecayFit fit_decay(const EnergyTrajectory& trajectory, double t_min) {
    DecayFit fit;
    std::vector<double> lt, le, t;
    double e0 = trajectory.energies.empty() ? 0.0 : trajectory.energies.front();
    for (size_t i = 0; i < trajectory.times.size(); ++i) {
        const double ti = trajectory.times[i];
        const double ei = trajectory.energies[i];
        if (ti < t_min || ei <= 1e-300 * std::max(1.0, e0)) continue;
        lt.push_back(std::log(ti));
        t.push_back(ti);
        le.push_back(std::log(ei));
    }
    if (lt.size() < 8 || t.back() < 10.0 * t.front()) {
        fit.inconclusive = true;
        return fit;
    }
    const LineFit alg = least_squares_line(lt, le);
    const LineFit expo = least_squares_line(t, le);
    fit.gamma = -alg.slope;
    fit.gamma_stderr = alg.slope_stderr;
    fit.omega = -expo.slope;
    fit.r2_algebraic = alg.r2;
    fit.r2_exponential = expo.r2;
    fit.exponential_better = expo.r2 > alg.r2;
    fit.r_hat = (fit.gamma > 0.0) ? 2.0 / fit.gamma : std::numeric_limits<double>::infinity();
    return fit;
}

DecayFit polynomial_decay_probe(const PhysicalParams& params,
                                const Geometry& geometry, EvolveOptions options) {
    options.smooth_by_inverse = true;
    if (options.frequency_cutoff <= 0.0) options.frequency_cutoff = 0.2 / options.dt;
    const EnergyTrajectory traj = evolve(params, geometry, options);
    return fit_decay(traj, options.t_final / 20.0);
}

const char* to_string(StabilityVerdict verdict) {
    switch (verdict) {
    case StabilityVerdict::exponential: return "exponential";
    case StabilityVerdict::polynomial_evidence: return "polynomial-evidence";
    case StabilityVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

StabilityVerdict classify(const std::vector<int>& ks,
                          const std::vector<double>& abscissa, const GrowthFit& fit) {
    if (abscissa.empty() || ks.size() != abscissa.size())
        return StabilityVerdict::inconclusive;
    const double worst = *std::max_element(abscissa.begin(), abscissa.end());

    // A smooth flat-or-decaying scan (too few peaks for a trend) is itself
    // the exponential signature, so the fallback all-sample slope counts.
    if (worst <= -1e-3 && fit.r_est <= 0.1) return StabilityVerdict::exponential;

    // Abscissa creeping toward zero along the mode tail: nondecreasing in
    // magnitude from k = 4 on (2% slack for eigenvalue noise), negative
    // throughout.
    std::vector<double> tail;
    for (size_t i = 0; i < ks.size(); ++i)
        if (ks[i] >= 4) tail.push_back(std::abs(abscissa[i]));
    bool tail_rises = tail.size() >= 3 && worst < 0.0;
    for (size_t i = 0; i + 1 < tail.size() && tail_rises; ++i)
        if (tail[i + 1] > 1.02 * tail[i]) tail_rises = false;
    if (tail_rises && !(tail.back() < tail.front())) tail_rises = false;

    if (tail_rises && !fit.inconclusive && fit.r_est >= 0.25 && fit.residual <= 0.15)
        return StabilityVerdict::polynomial_evidence;
    return StabilityVerdict::inconclusive;
}

} // namespace pmstab
