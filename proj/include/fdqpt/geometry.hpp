#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fdqpt/protocols.hpp"

namespace fdqpt {

// Amplitudes smaller than this have no usable phase; such samples are marked
// invalid in traces and bridged when accumulating windings.
inline constexpr double phase_amplitude_floor = 1e-12;

/// Principal argument of the full return amplitude e^{-i l E_v} G_v(k, s) at
/// t = s + 2l, reduced to (-pi, pi].  Raises degenerate_band_error at a band
/// touching and undefined_phase_error when the amplitude modulus falls below
/// phase_amplitude_floor.
double total_phase(const quench_protocol& p, double k, int v, double t);

/// Accumulated expectation phase -integral <psi|H|psi> dt' in closed form;
/// piecewise linear in t with slope -v h_x n_x, then -v h_y n_y, per half
/// period.  Raises degenerate_band_error at a band touching.
double dynamical_phase(const quench_protocol& p, double k, int v, double t);

/// total_phase minus dynamical_phase at the same point.
double geometric_phase(const quench_protocol& p, double k, int v, double t);

/// Reference evaluation of the dynamical phase by midpoint quadrature of
/// -<psi(t')|H(t')|psi(t')>, splitting the integral at the quench switch
/// times where the integrand is discontinuous.  Intended for cross-checks;
/// the closed form above is exact.
double dynamical_phase_quadrature(const quench_protocol& p, double k, int v, double t,
                                  std::size_t steps_per_period = 10000);

// ---------------------------------------------------------------------------
// sampled phases over the zone
// ---------------------------------------------------------------------------
struct phase_trace {
    std::string protocol_id;
    int v = -1;
    std::vector<double> k_grid;     // N momenta, midpoint-offset over [-pi, pi)
    std::vector<double> s_grid;     // M times
    std::vector<double> total;      // N x M, row-major in k
    std::vector<double> dynamical;  // N x M
    std::vector<double> geometric;  // N x M
    std::vector<char> valid;        // N x M; 0 where the amplitude phase is undefined

    std::size_t index(std::size_t ik, std::size_t is) const { return ik * s_grid.size() + is; }
};

/// Evaluate total, dynamical and geometric phases on a k_count x |s_grid|
/// sample; entries at band touchings or vanishing amplitudes are flagged
/// invalid instead of raising.
phase_trace compute_phase_trace(const quench_protocol& p, int v, std::size_t k_count,
                                const std::vector<double>& s_grid);

// ---------------------------------------------------------------------------
// dynamical topological order parameter
// ---------------------------------------------------------------------------
enum class dtop_range {
    reduced,  // geometric-phase winding across [0, pi/2] (open chain)
    full,     // winding around the whole zone [-pi, pi) (closed loop)
};

struct dtop_jump {
    double t_c = 0.0;  // reference critical time the jump is measured across
    int delta = 0;     // round(w after) - round(w before); 0 is recorded too
    double before = 0.0;
    double after = 0.0;
};

struct dtop_plateau {
    double t_begin = 0.0;
    double t_end = 0.0;
    int level = 0;  // common round(w) of every sample inside
};

struct dtop_window {  // maximal run of non-quantized samples
    double t_begin = 0.0;
    double t_end = 0.0;
};

struct dtop_trace {
    std::string protocol_id;
    int v = -1;
    dtop_range range = dtop_range::reduced;
    std::size_t k_count = 0;      // base channel resolution before refinement
    std::vector<double> t_grid;   // uniform, may span several periods
    std::vector<double> w;        // winding number per time sample
    std::vector<double> critical_markers;  // reference times inside the grid span
    std::vector<dtop_jump> jumps;
    std::vector<dtop_plateau> plateaus;
    std::vector<dtop_window> nonquantized;
};

/// Winding of the geometric phase along the quasimomentum channel at every
/// grid time, plus annotations against a reference set of in-period critical
/// times (jumps across each, quantized plateaus between consecutive markers,
/// and maximal non-quantized windows away from them).
///
/// The channel is sampled midpoint-offset and refined by doubling (up to
/// four times) while any folded phase step exceeds pi/2; samples with an
/// undefined phase are bridged.  Times within 1e-9 of a marker are evaluated
/// one grid step to the right, so every sample sits on a well-defined side
/// of the jump.  The reduced range needs both declared symmetries
/// (config_error otherwise); the grid must be uniform and non-negative
/// (domain_error otherwise).
dtop_trace dtop(const quench_protocol& p, int v, const std::vector<double>& t_grid,
                dtop_range range, std::size_t k_count = 1200,
                const std::vector<double>& critical_times = {});

}  // namespace fdqpt
