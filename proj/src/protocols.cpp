#include "fdqpt/protocols.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <utility>

namespace fdqpt {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double symmetry_tolerance = 1e-12;

// Spot-check the declared symmetry flags on random quasimomenta so that a
// wrong declaration fails loudly at construction instead of corrupting
// symmetry-reduced results later.
void verify_declared_symmetries(const std::function<double(double)>& hx,
                                const std::function<double(double)>& hy,
                                const protocol_symmetries& declared, const std::string& label) {
    std::mt19937 rng(0x51e57u);
    std::uniform_real_distribution<double> half(0.0, pi);
    for (int trial = 0; trial < 128; ++trial) {
        const double k = half(rng) - pi;  // in [-pi, 0): k + pi stays inside the zone
        if (declared.translation_by_pi) {
            if (std::abs(hx(k + pi) + hx(k)) > symmetry_tolerance ||
                std::abs(hy(k + pi) + hy(k)) > symmetry_tolerance) {
                throw parameter_error("protocol '" + label +
                                      "' declares translation-by-pi antisymmetry "
                                      "but violates it on sampled quasimomenta");
            }
        }
        if (declared.reflection) {
            const double q = half(rng);  // in [0, pi)
            if (std::abs(hx(-q) - hx(q)) > symmetry_tolerance ||
                std::abs(hy(-q) + hy(q)) > symmetry_tolerance) {
                throw parameter_error("protocol '" + label +
                                      "' declares reflection symmetry "
                                      "(h_x even, h_y odd) but violates it on sampled quasimomenta");
            }
        }
    }
}

}  // namespace

quench_protocol make_pql(double j_x, double j_y) {
    if (!(j_x > 0.0) || !(j_y > 0.0)) {
        throw parameter_error("pql quench amplitudes must be positive");
    }
    quench_protocol p;
    p.kind_ = protocol_kind::pql;
    p.label_ = "pql";
    p.jx_ = j_x;
    p.jy_ = j_y;
    p.hx_ = [j_x](double k) { return j_x * std::cos(k); };
    p.hy_ = [j_y](double k) { return j_y * std::sin(k); };
    p.symmetries_ = {true, true};
    return p;
}

quench_protocol make_custom(std::string label, std::function<double(double)> h_x,
                            std::function<double(double)> h_y, protocol_symmetries declared) {
    if (!h_x || !h_y) {
        throw parameter_error("custom protocol requires both quench callables");
    }
    verify_declared_symmetries(h_x, h_y, declared, label);
    quench_protocol p;
    p.kind_ = protocol_kind::custom;
    p.label_ = std::move(label);
    p.hx_ = std::move(h_x);
    p.hy_ = std::move(h_y);
    p.symmetries_ = declared;
    return p;
}

std::string describe(const quench_protocol& p) {
    if (p.kind() == protocol_kind::pql) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "pql jx=%.17g jy=%.17g", p.amplitude_x(),
                      p.amplitude_y());
        return std::string(buf);
    }
    return "custom " + p.label();
}

reduced_time reduce_time(double t) {
    double cycles = std::floor(t / driving_period);
    double s = t - driving_period * cycles;
    if (s >= driving_period) {  // rounding at the upper edge for tiny negative t
        s -= driving_period;
        cycles += 1.0;
    }
    if (s < 0.0) s = 0.0;
    return {static_cast<long long>(cycles), s};
}

pauli_operator hamiltonian_at(const quench_protocol& p, double k, double t) {
    const double s = reduce_time(t).s;
    if (s < 1.0) {
        return {cplx(0.0), cplx(p.h_x(k)), cplx(0.0), cplx(0.0)};
    }
    return {cplx(0.0), cplx(0.0), cplx(p.h_y(k)), cplx(0.0)};
}

}  // namespace fdqpt
