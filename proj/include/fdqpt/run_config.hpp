#pragma once

#include <string>
#include <vector>

#include "fdqpt/geometry.hpp"
#include "fdqpt/protocols.hpp"

namespace fdqpt {

// ---------------------------------------------------------------------------
// run configuration
//
// Flat key=value text format, one entry per line, '#' starts a comment.
// Quench amplitudes and sweep bounds are given in units of pi.
// ---------------------------------------------------------------------------
struct run_config {
    std::string protocol{"pql"};  // only "pql" can be configured
    double jx_over_pi = 0.5;
    double jy_over_pi = 1.1;
    int band_v = -1;       // +1 or -1
    int k_count = 300;     // momenta for rate / spectrum / phase sampling
    int s_count = 2000;    // time samples per driving period
    int periods = 1;       // driving periods covered by time grids
    std::string dtop_range{"reduced"};  // "reduced" or "full"
    int dtop_k_count = 1200;            // base winding channel resolution
    double theta_cusp = 20.0;           // curvature outlier threshold
    std::string out_dir{"out"};
    bool export_g = false;      // also write the full probability matrix
    bool export_phase = false;  // also write the sampled phase decomposition
    int workers = 0;            // sweep worker threads; 0 picks automatically
    double sweep_jx_min_over_pi = 0.0;
    double sweep_jx_max_over_pi = 0.0;
    double sweep_jx_step_over_pi = 0.0;
    double sweep_jy_min_over_pi = 0.0;
    double sweep_jy_max_over_pi = 0.0;
    double sweep_jy_step_over_pi = 0.0;

    bool operator==(const run_config&) const = default;
};

/// Parse the key=value format; unknown keys, unparsable values and unknown
/// enumeration names raise config_error.  Later entries override earlier
/// ones.
run_config parse_config_text(const std::string& text);

/// parse_config_text over the contents of a file; unreadable files raise
/// io_error.
run_config parse_config_file(const std::string& path);

/// Set one field from its textual form (same rules as the file format).
void apply_override(run_config& cfg, const std::string& key, const std::string& value);

/// Check every invariant that does not depend on the command being run:
/// positive amplitudes, counts >= 2, band_v in {-1, +1}, periods >= 1,
/// positive threshold, known protocol and range names, workers >= 0.
/// Raises config_error on the first violation.
void validate(const run_config& cfg);

/// Canonical textual form: every key on its own line, declaration order,
/// doubles at 17 significant digits.  parse_config_text inverts it exactly.
std::string serialize_config(const run_config& cfg);

/// Instantiate the configured protocol (validates first).
quench_protocol make_protocol(const run_config& cfg);

/// Uniform time grid over all configured periods, s_count samples per period.
std::vector<double> make_time_grid(const run_config& cfg);

/// Uniform time grid over a single period, s_count samples.
std::vector<double> single_period_grid(const run_config& cfg);

/// "reduced" / "full" to the winding range enum; config_error otherwise.
dtop_range parse_dtop_range(const std::string& name);

/// Inclusive sweep values min, min+step, ... (max included within a relative
/// 1e-9 slack); raises config_error when the range is empty or the step is
/// not positive.
std::vector<double> sweep_values(double min_value, double max_value, double step);

}  // namespace fdqpt
