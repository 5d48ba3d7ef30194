#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fdqpt/pauli.hpp"
#include "fdqpt/protocols.hpp"

namespace fdqpt {

// Probabilities are clamped from below at this floor before taking logs in
// the rate function, so exact zeros stay finite without moving any value
// that matters at double precision.
inline constexpr double g_floor = 1e-300;

/// Overlap between a Floquet eigenstate and its image evolved to in-period
/// time s in [0, 2) (band index v = +1 or -1):
///   s in [0, 1):  cos(s h_x) - i sin(s h_x) v n_x
///   s in [1, 2):  e^{-i v e} [cos((2-s) h_y) + i sin((2-s) h_y) v n_y]
/// Throws domain_error for s outside [0, 2), parameter_error for bad v and
/// degenerate_band_error where the quasienergy bands touch.
cplx return_amplitude(const quench_protocol& p, double k, double s, int v);

/// Squared modulus of the return amplitude; identical for both bands, so it
/// takes no band index.  At a band touching the formula is evaluated a
/// nudge (1e-6) away in k instead of failing: the probability extends
/// continuously across the touching, and the nudge keeps minimizers that
/// walk arbitrarily close to such momenta well defined.
double return_probability(const quench_protocol& p, double k, double s);

// ---------------------------------------------------------------------------
// sampled return probability and rate function
// ---------------------------------------------------------------------------
struct return_trace {
    explicit return_trace(const quench_protocol& p) : protocol_id(describe(p)), protocol(p) {}

    std::string protocol_id;      // describe() of the protocol
    quench_protocol protocol;     // retained so detectors can refine off-grid
    std::vector<double> k_grid;   // N momenta, midpoint-offset over [-pi, pi)
    std::vector<double> s_grid;   // M times in [0, 2)
    std::vector<double> g;        // N x M probabilities, row-major in k
    std::vector<double> f;        // M rate-function values

    double g_at(std::size_t ik, std::size_t is) const { return g[ik * s_grid.size() + is]; }
};

/// Evaluate the return probability on k_count x |s_grid| samples and reduce
/// each time column to the rate function
///   f(s) = -(1/N) sum_k ln g(k, s)
/// (composite midpoint rule in k, pairwise summation).  Requires
/// k_count >= 2 (parameter_error) and every s in [0, 2) (domain_error).
return_trace rate_function(const quench_protocol& p, std::size_t k_count,
                           const std::vector<double>& s_grid);

// ---------------------------------------------------------------------------
// cusp detection
// ---------------------------------------------------------------------------
struct cusp_detection {
    double s = 0.0;              // refined critical time
    double residual = 0.0;       // certified off-grid minimum of g near the valley
    double sharpness = 0.0;      // peak curvature score of f within the window
    std::size_t grid_index = 0;  // time column the candidate came from
};

struct cusp_match {
    double predicted = 0.0;
    double detected = 0.0;
    double distance = 0.0;
};

struct cusp_report {
    double grid_spacing = 0.0;
    std::vector<std::size_t> flagged_indices;   // curvature outliers of f
    std::vector<cusp_detection> detections;     // accepted cusps, sorted by time
    std::vector<double> predicted_times;        // distinct sorted reference times
    std::vector<cusp_match> matches;            // |detected - predicted| <= 2 * spacing
    std::vector<double> unmatched_predictions;
    std::vector<double> unmatched_detections;
};

/// Locate rate-function cusps on a trace and reconcile them with a predicted
/// set of critical times.  A time column is accepted only if (a) the second
/// difference of f there is a > theta outlier against the median curvature,
/// (b) the sub-grid valley depth of g is locally minimal and below 5e-2, and
/// (c) a nested golden-section search in (k, s) around the valley certifies
/// an off-grid probability minimum below 1e-8.  Columns within 5 steps of
/// the period boundaries and the half-period switch are excluded; nearby
/// acceptances merge, keeping the deeper certificate.  Requires a uniform
/// s_grid with at least 500 points per period (domain_error otherwise).
cusp_report detect_cusps(const return_trace& trace, const std::vector<double>& predicted_times,
                         double theta = 20.0);

}  // namespace fdqpt
