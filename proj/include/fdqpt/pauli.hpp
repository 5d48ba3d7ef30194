#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace fdqpt {

using cplx = std::complex<double>;

// Two-component spinor on the Bloch sphere of one quasimomentum sector.
using state_vector = std::array<cplx, 2>;

// ---------------------------------------------------------------------------
// closed Pauli algebra
//
// Every operator on the two-band space is stored by its four coefficients in
// the basis {sigma_0, sigma_x, sigma_y, sigma_z}.  Products, adjoints and
// exponentials are evaluated in this representation directly; no generic
// matrix library is involved, so identities like sigma_j^2 = 1 hold at the
// level of the stored coefficients.
// ---------------------------------------------------------------------------
struct pauli_operator {
    cplx c0{0.0, 0.0};
    cplx cx{0.0, 0.0};
    cplx cy{0.0, 0.0};
    cplx cz{0.0, 0.0};

    static pauli_operator identity() { return {cplx(1.0), cplx(0.0), cplx(0.0), cplx(0.0)}; }

    pauli_operator dagger() const {
        return {std::conj(c0), std::conj(cx), std::conj(cy), std::conj(cz)};
    }

    pauli_operator operator-() const { return {-c0, -cx, -cy, -cz}; }

    // Column action: matrix rows are [c0+cz, cx-i*cy; cx+i*cy, c0-cz].
    state_vector apply(const state_vector& psi) const {
        const cplx i(0.0, 1.0);
        return {(c0 + cz) * psi[0] + (cx - i * cy) * psi[1],
                (cx + i * cy) * psi[0] + (c0 - cz) * psi[1]};
    }

    double max_coefficient_distance(const pauli_operator& o) const {
        return std::max(std::max(std::abs(c0 - o.c0), std::abs(cx - o.cx)),
                        std::max(std::abs(cy - o.cy), std::abs(cz - o.cz)));
    }
};

// (a0 + a.s)(b0 + b.s) = a0 b0 + a.b + (a0 b + b0 a + i a x b).s
inline pauli_operator operator*(const pauli_operator& a, const pauli_operator& b) {
    const cplx i(0.0, 1.0);
    pauli_operator r;
    r.c0 = a.c0 * b.c0 + a.cx * b.cx + a.cy * b.cy + a.cz * b.cz;
    r.cx = a.c0 * b.cx + b.c0 * a.cx + i * (a.cy * b.cz - a.cz * b.cy);
    r.cy = a.c0 * b.cy + b.c0 * a.cy + i * (a.cz * b.cx - a.cx * b.cz);
    r.cz = a.c0 * b.cz + b.c0 * a.cz + i * (a.cx * b.cy - a.cy * b.cx);
    return r;
}

// exp(-i theta sigma_x) = cos(theta) - i sin(theta) sigma_x
inline pauli_operator pauli_exp_x(double theta) {
    return {cplx(std::cos(theta)), cplx(0.0, -std::sin(theta)), cplx(0.0), cplx(0.0)};
}

// exp(-i theta sigma_y)
inline pauli_operator pauli_exp_y(double theta) {
    return {cplx(std::cos(theta)), cplx(0.0), cplx(0.0, -std::sin(theta)), cplx(0.0)};
}

// exp(-i theta n.sigma) for a real unit axis n
inline pauli_operator pauli_exp_axis(double theta, double nx, double ny, double nz) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {cplx(c), cplx(0.0, -s * nx), cplx(0.0, -s * ny), cplx(0.0, -s * nz)};
}

// max-abs coefficient deviation of U^dagger U from the identity
inline double unitarity_defect(const pauli_operator& u) {
    return (u.dagger() * u).max_coefficient_distance(pauli_operator::identity());
}

inline cplx inner(const state_vector& a, const state_vector& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

inline double norm(const state_vector& a) { return std::sqrt(std::norm(a[0]) + std::norm(a[1])); }

inline state_vector scaled(const state_vector& a, const cplx& z) { return {z * a[0], z * a[1]}; }

}  // namespace fdqpt
