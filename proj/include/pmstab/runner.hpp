#pragma once

#include <string>

#include "pmstab/config.hpp"

namespace pmstab {

// Executes the configured experiment, writing CSV artifacts and report.json
// into the output directory. Returns the process exit status: 0 on success,
// 2 on configuration errors, 3 on numerical failures. CSV output is
// byte-identical across runs with the same config and seed.
int run(const RunConfig& config);

// Runs the stability-classification experiment for both configs (which may
// differ only in the physical constants, output directory and seed) and
// writes a joint compare.json with both verdicts, abscissa profiles and
// scan envelopes, plus a field-level diff. Throws UsageError on structurally
// different configs.
int compare(const RunConfig& config_a, const RunConfig& config_b,
            const std::string& out_dir);

// Debug helpers behind CLI subcommands: radial nodes/weights as CSV, and the
// per-mode reduced generator and gram as raw binary dumps (8-byte magic
// "PMSTAB01", int64 rows, int64 cols, row-major doubles).
int dump_grids(const RunConfig& config);
int dump_operators(const RunConfig& config);

} // namespace pmstab
