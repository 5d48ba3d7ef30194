#include "fdqpt/floquet.hpp"

#include <algorithm>
#include <cmath>

namespace fdqpt {

namespace {

// Eigenvector of d.sigma for eigenvalue ev (= +e or -e), normalized.
// Primary gauge column (d_x - i d_y, ev - d_z) degenerates when ev ~ d_z,
// i.e. the axis points along +/- z; the patch gauge column (ev + d_z,
// d_x + i d_y) is regular exactly there.  Both satisfy the eigen-relation.
state_vector axis_eigenvector(double ev, const std::array<double, 3>& d, double e) {
    cplx a, b;
    if (std::abs(ev - d[2]) < 1e-9 * e) {
        a = cplx(ev + d[2]);
        b = cplx(d[0], d[1]);
    } else {
        a = cplx(d[0], -d[1]);
        b = cplx(ev - d[2]);
    }
    const double len = std::sqrt(std::norm(a) + std::norm(b));
    return {a / len, b / len};
}

}  // namespace

band_point band_at(const quench_protocol& p, double k) {
    band_point b;
    b.hx = p.h_x(k);
    b.hy = p.h_y(k);
    const double cos_e = std::clamp(std::cos(b.hx) * std::cos(b.hy), -1.0, 1.0);
    b.e = std::acos(cos_e);
    b.sin_e = std::sin(b.e);
    b.gapless = b.sin_e < eps_gap;
    if (!b.gapless) {
        b.nx = std::sin(b.hx) * std::cos(b.hy) / b.sin_e;
        b.ny = std::sin(b.hy) * std::cos(b.hx) / b.sin_e;
        b.nz = -std::sin(b.hx) * std::sin(b.hy) / b.sin_e;
    }
    return b;
}

pauli_operator floquet_operator(const quench_protocol& p, double k) {
    return pauli_exp_y(p.h_y(k)) * pauli_exp_x(p.h_x(k));
}

spectrum_sample spectrum_at(const quench_protocol& p, double k) {
    const band_point b = band_at(p, k);
    spectrum_sample s;
    s.k = k;
    s.e = b.e;
    s.gapless = b.gapless;
    if (b.gapless) {
        // U(k) = +/- identity to within eps_gap: any orthonormal pair works,
        // keep the canonical basis and let the flag exclude eigenstate use.
        return s;
    }
    s.n = {b.nx, b.ny, b.nz};
    s.d = {b.e * b.nx, b.e * b.ny, b.e * b.nz};
    s.psi_plus = axis_eigenvector(+b.e, s.d, b.e);
    s.psi_minus = axis_eigenvector(-b.e, s.d, b.e);
    return s;
}

pauli_operator micromotion_operator(const quench_protocol& p, double k, double s) {
    if (!(s >= 0.0 && s < driving_period)) {
        throw domain_error("micromotion time must lie in [0, 2)");
    }
    if (s < 1.0) {
        return pauli_exp_x(s * p.h_x(k));
    }
    return pauli_exp_y(-(driving_period - s) * p.h_y(k)) * floquet_operator(p, k);
}

state_vector evolve_eigenstate(const quench_protocol& p, double k, int v, double t) {
    if (v != 1 && v != -1) {
        throw parameter_error("band sign v must be +1 or -1");
    }
    const spectrum_sample sp = spectrum_at(p, k);
    if (sp.gapless) {
        throw degenerate_band_error(k);
    }
    const auto [cycles, s] = reduce_time(t);
    const double ev = v * sp.e;
    const state_vector& psi = (v > 0) ? sp.psi_plus : sp.psi_minus;
    if (s < 1.0) {
        const cplx phase = std::polar(1.0, -static_cast<double>(cycles) * ev);
        return scaled(pauli_exp_x(s * p.h_x(k)).apply(psi), phase);
    }
    const cplx phase = std::polar(1.0, -static_cast<double>(cycles + 1) * ev);
    return scaled(pauli_exp_y(-(driving_period - s) * p.h_y(k)).apply(psi), phase);
}

}  // namespace fdqpt
