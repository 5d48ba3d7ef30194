#pragma once

#include "fdqpt/run_config.hpp"

namespace fdqpt {

// Each command validates the configuration, computes its artifact and writes
// CSV/JSON files under cfg.out_dir (created if missing).  Outputs are
// deterministic: rerunning with the same configuration reproduces the same
// bytes.  Filesystem problems raise io_error; configuration problems raise
// config_error (or parameter/domain errors from the library underneath).

/// spectrum.csv: quasienergy and unit vector over the momentum grid.
void cmd_spectrum(const run_config& cfg);

/// rate.csv (+ g.csv with export_g) and cusps.json: rate function over one
/// period, detected cusps reconciled against the enumerated critical times.
void cmd_rate(const run_config& cfg);

/// dtop.csv and dtop_annotations.json (+ phase.csv with export_phase):
/// geometric-phase winding over the configured periods with jump, plateau
/// and non-quantized-window annotations.
void cmd_dtop(const run_config& cfg);

/// critical_points.json (exact enumeration) and critical_meta.json with the
/// distinct times, band touchings and phase-boundary membership.
void cmd_critical(const run_config& cfg);

/// phase_diagram.csv over the configured (jx, jy) sweep grid: boundary
/// membership, touching count and critical-time count per point.
void cmd_phase_diagram(const run_config& cfg);

/// Rate + cusp run for every sweep grid point in its own subdirectory, on a
/// bounded worker pool; per-point failures are recorded in sweep_summary.json
/// without aborting the remaining points.
void cmd_sweep(const run_config& cfg);

}  // namespace fdqpt
