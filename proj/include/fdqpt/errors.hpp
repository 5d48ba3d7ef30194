#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace fdqpt {

// ---------------------------------------------------------------------------
// error taxonomy
//
// The CLI maps these onto process exit codes:
//   parameter_error / config_error / domain_error -> 2
//   degeneracy_error (and children)               -> 3
//   io_error                                      -> 4
// ---------------------------------------------------------------------------

// Invalid physical or numerical parameters (non-positive amplitudes,
// undersized grids, bad band sign, ...).
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Problems with a run configuration (unknown keys, unparsable values,
// inconsistent option combinations).
struct config_error : parameter_error {
    using parameter_error::parameter_error;
};

// An argument lies outside the mathematical domain of an operation
// (micromotion time outside [0,2), non-uniform time grid, ...).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A quantity was requested at a point where it has no well-defined value.
struct degeneracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline std::string format_momentum(double k) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", k);
    return std::string(buf);
}
}  // namespace detail

// Floquet band gap closed at the requested quasimomentum: the eigenstates
// (and everything built from them) are ill-defined there.
struct degenerate_band_error : degeneracy_error {
    explicit degenerate_band_error(double k_value)
        : degeneracy_error("degenerate Floquet band at quasimomentum k = " +
                           detail::format_momentum(k_value)),
          k(k_value) {}
    double k;
};

// Phase of a (numerically) vanishing amplitude was requested.
struct undefined_phase_error : degeneracy_error {
    using degeneracy_error::degeneracy_error;
};

// Filesystem failures while emitting results.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fdqpt
