#pragma once

#include <string>
#include <vector>

#include "pmstab/params.hpp"

namespace pmstab {

enum class Experiment {
    spectrum,
    resolvent,
    evolve,
    decay_probe,
    symbol_scan,
    ls_check,
    gc_scan,
    all,
};

const char* to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

// Flat key-value run configuration. Unknown keys are hard errors: a typo in
// a physical constant would silently change the verdicts.
struct RunConfig {
    PhysicalParams params;
    Geometry geom;

    int n_annulus = 32;
    int n_disk = 32;
    int k_max = 24;

    Experiment experiment = Experiment::all;

    // Resolvent scan window and density. The mode family for spectra and
    // scans is k = 0, scan_k_step, ... up to k_max; a stride > 1 thins the
    // family (the envelope only needs the least-damped resonance near each
    // frequency).
    double lambda_min = 2.0;
    double lambda_max = 200.0;
    int lambda_per_decade = 24;
    int scan_k_step = 1;

    // Time stepping.
    double t_final = 50.0;
    double dt = 0.01;
    std::string preset = "mixed";
    std::vector<int> modes = {0, 1, 2, 3};
    std::string system = "full"; // full | membrane_dirichlet

    // Symbol-level checks.
    int symbol_density = 64;
    int ls_grid = 32;
    double gc_x0_x = 0.0;
    double gc_x0_y = 0.0;

    std::string out_dir = "out";
    unsigned long long seed = 1;

    void validate() const;
    std::string serialize() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

} // namespace pmstab
