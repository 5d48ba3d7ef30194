#pragma once

#include <array>

#include "fdqpt/pauli.hpp"
#include "fdqpt/protocols.hpp"

namespace fdqpt {

// A sample counts as gapless when sin E drops below this; eigenstates and the
// unit vector have vanishing denominators there (the set is measure-zero and
// the standard grids are offset to step around it).
inline constexpr double eps_gap = 1e-9;

// ---------------------------------------------------------------------------
// single-momentum band data
// ---------------------------------------------------------------------------
struct spectrum_sample {
    double k = 0.0;
    double e = 0.0;                       // eigenphase, principal arccos branch in [0, pi]
    std::array<double, 3> n{0.0, 0.0, 0.0};  // unit vector of the effective Hamiltonian
    std::array<double, 3> d{0.0, 0.0, 0.0};  // d = e * n
    state_vector psi_plus{cplx(1.0), cplx(0.0)};
    state_vector psi_minus{cplx(0.0), cplx(1.0)};
    bool gapless = false;
};

// Lightweight spectral data (no eigenstates); shared workhorse for the
// observable and phase evaluations.
struct band_point {
    double hx = 0.0, hy = 0.0;
    double e = 0.0, sin_e = 0.0;
    double nx = 0.0, ny = 0.0, nz = 0.0;
    bool gapless = false;
};
band_point band_at(const quench_protocol& p, double k);

// Single-period propagator U(k) = exp(-i h_y sigma_y) exp(-i h_x sigma_x).
pauli_operator floquet_operator(const quench_protocol& p, double k);

// Eigenphase, unit vector, and both Floquet eigenstates at one quasimomentum.
// Gapless samples are flagged, never rejected.
spectrum_sample spectrum_at(const quench_protocol& p, double k);

// Within-period propagator U(k, s):
//   exp(-i s h_x sigma_x)                      for s in [0, 1)
//   exp(+i (2-s) h_y sigma_y) U(k)             for s in [1, 2)
// (both branches agree at s = 1); s outside [0, 2) raises domain_error.
pauli_operator micromotion_operator(const quench_protocol& p, double k, double s);

// Floquet eigenstate evolved to time t = s + 2l:
//   e^{-i l E_v} exp(-i s h_x sigma_x) |psi_v>        for s in [0, 1)
//   e^{-i (l+1) E_v} exp(+i (2-s) h_y sigma_y) |psi_v> for s in [1, 2)
// with E_v = v E; raises degenerate_band_error at gapless quasimomenta.
state_vector evolve_eigenstate(const quench_protocol& p, double k, int v, double t);

}  // namespace fdqpt
