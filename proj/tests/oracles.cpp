#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

mat2 mat2::identity() { return {{cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)}}; }

mat2 operator*(const mat2& x, const mat2& y) {
    return {{x.a[0] * y.a[0] + x.a[1] * y.a[2], x.a[0] * y.a[1] + x.a[1] * y.a[3],
             x.a[2] * y.a[0] + x.a[3] * y.a[2], x.a[2] * y.a[1] + x.a[3] * y.a[3]}};
}

mat2 operator+(const mat2& x, const mat2& y) {
    return {{x.a[0] + y.a[0], x.a[1] + y.a[1], x.a[2] + y.a[2], x.a[3] + y.a[3]}};
}

mat2 scaled(const mat2& x, const cplx& z) {
    return {{z * x.a[0], z * x.a[1], z * x.a[2], z * x.a[3]}};
}

mat2 dagger(const mat2& x) {
    return {{std::conj(x.a[0]), std::conj(x.a[2]), std::conj(x.a[1]), std::conj(x.a[3])}};
}

state_vector apply(const mat2& x, const state_vector& v) {
    return {x.a[0] * v[0] + x.a[1] * v[1], x.a[2] * v[0] + x.a[3] * v[1]};
}

double max_abs_diff(const mat2& x, const mat2& y) {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(x.a[i] - y.a[i]));
    return worst;
}

mat2 pauli_matrix(const cplx& c0, const cplx& cx, const cplx& cy, const cplx& cz) {
    const cplx i(0.0, 1.0);
    return {{c0 + cz, cx - i * cy, cx + i * cy, c0 - cz}};
}

mat2 from_pauli(const fdqpt::pauli_operator& p) { return pauli_matrix(p.c0, p.cx, p.cy, p.cz); }

mat2 expm(const mat2& m) {
    double norm = 0.0;
    for (const cplx& entry : m.a) norm = std::max(norm, std::abs(entry));
    int squarings = 0;
    while (norm > 0.25 && squarings < 40) {
        norm *= 0.5;
        ++squarings;
    }
    const mat2 x = scaled(m, cplx(std::ldexp(1.0, -squarings)));
    mat2 term = mat2::identity();
    mat2 sum = mat2::identity();
    for (int j = 1; j <= 24; ++j) {
        term = scaled(term * x, cplx(1.0 / j));
        sum = sum + term;
    }
    for (int j = 0; j < squarings; ++j) sum = sum * sum;
    return sum;
}

mat2 rotation(double theta, double nx, double ny, double nz) {
    return expm(scaled(pauli_matrix(cplx(0.0), cplx(nx), cplx(ny), cplx(nz)), cplx(0.0, -theta)));
}

namespace {

struct split_time {
    long long cycles;
    double s;
};

split_time split(double t) {
    double c = std::floor(t / 2.0);
    double s = t - 2.0 * c;
    if (s >= 2.0) {
        s -= 2.0;
        c += 1.0;
    }
    if (s < 0.0) s = 0.0;
    return {static_cast<long long>(c), s};
}

}  // namespace

mat2 brute_propagator(const fdqpt::quench_protocol& p, double k, double t) {
    const double hx = p.h_x(k);
    const double hy = p.h_y(k);
    const mat2 u1 = rotation(hx, 1.0, 0.0, 0.0);
    const mat2 period = rotation(hy, 0.0, 1.0, 0.0) * u1;

    const split_time st = split(t);
    mat2 u = st.s < 1.0 ? rotation(st.s * hx, 1.0, 0.0, 0.0)
                        : rotation((st.s - 1.0) * hy, 0.0, 1.0, 0.0) * u1;
    if (st.cycles >= 0) {
        for (long long l = 0; l < st.cycles; ++l) u = u * period;
    } else {
        const mat2 inverse = dagger(period);
        for (long long l = 0; l < -st.cycles; ++l) u = u * inverse;
    }
    return u;
}

cplx brute_return_amplitude(const fdqpt::quench_protocol& p, double k, double t, int v) {
    if (v != 1 && v != -1) throw std::invalid_argument("band sign must be +1 or -1");
    const mat2 uf = rotation(p.h_y(k), 0.0, 1.0, 0.0) * rotation(p.h_x(k), 1.0, 0.0, 0.0);

    const double c = std::clamp(0.5 * (uf.a[0] + uf.a[3]).real(), -1.0, 1.0);
    const cplx lambda = std::exp(cplx(0.0, -v * std::acos(c)));

    // Null vector of (U - lambda), taken from the better-conditioned row.
    const cplx m00 = uf.a[0] - lambda, m01 = uf.a[1];
    const cplx m10 = uf.a[2], m11 = uf.a[3] - lambda;
    state_vector psi;
    if (std::abs(m00) + std::abs(m01) >= std::abs(m10) + std::abs(m11)) {
        psi = {m01, -m00};
    } else {
        psi = {m11, -m10};
    }
    const double len = std::sqrt(std::norm(psi[0]) + std::norm(psi[1]));
    psi = {psi[0] / len, psi[1] / len};

    const state_vector evolved = oracle::apply(brute_propagator(p, k, t), psi);
    return std::conj(psi[0]) * evolved[0] + std::conj(psi[1]) * evolved[1];
}

}  // namespace oracle
