#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fdqpt/errors.hpp"
#include "fdqpt/floquet.hpp"
#include "fdqpt/grids.hpp"
#include "fdqpt/protocols.hpp"
#include "oracles.hpp"

using fdqpt::cplx;
using fdqpt::k_pi;
using fdqpt::pauli_operator;

namespace {

const cplx imag_unit(0.0, 1.0);

double state_distance(const fdqpt::state_vector& a, const fdqpt::state_vector& b) {
    return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
}

}  // namespace

// ---- closed Pauli algebra -----------------------------------------------------

TEST_CASE("pauli products close with the structure constants") {
    const pauli_operator sx{cplx(0.0), cplx(1.0), cplx(0.0), cplx(0.0)};
    const pauli_operator sy{cplx(0.0), cplx(0.0), cplx(1.0), cplx(0.0)};
    const pauli_operator sz{cplx(0.0), cplx(0.0), cplx(0.0), cplx(1.0)};

    CHECK((sx * sy).max_coefficient_distance(
              {cplx(0.0), cplx(0.0), cplx(0.0), imag_unit}) <= 1e-15);
    CHECK((sy * sx).max_coefficient_distance(
              {cplx(0.0), cplx(0.0), cplx(0.0), -imag_unit}) <= 1e-15);
    CHECK((sy * sz).max_coefficient_distance(
              {cplx(0.0), imag_unit, cplx(0.0), cplx(0.0)}) <= 1e-15);
    CHECK((sx * sx).max_coefficient_distance(pauli_operator::identity()) <= 1e-15);
    CHECK((sz * sz).max_coefficient_distance(pauli_operator::identity()) <= 1e-15);

    // column action against the dense representation
    const fdqpt::state_vector up{cplx(1.0), cplx(0.0)};
    const fdqpt::state_vector down{cplx(0.0), cplx(1.0)};
    CHECK(state_distance(sx.apply(up), down) <= 1e-15);
    CHECK(state_distance(sy.apply(up), {cplx(0.0), imag_unit}) <= 1e-15);
    CHECK(state_distance(sz.apply(down), {cplx(0.0), cplx(-1.0)}) <= 1e-15);
}

TEST_CASE("closed-form rotations agree with the dense matrix exponential") {
    std::mt19937 rng(12345u);
    std::uniform_real_distribution<double> angles(-6.0, 6.0);
    std::uniform_real_distribution<double> axes(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double theta = angles(rng);
        double nx = axes(rng), ny = axes(rng), nz = axes(rng);
        const double len = std::sqrt(nx * nx + ny * ny + nz * nz);
        if (len < 1e-3) continue;
        nx /= len;
        ny /= len;
        nz /= len;

        const auto closed = oracle::from_pauli(fdqpt::pauli_exp_axis(theta, nx, ny, nz));
        const auto dense = oracle::rotation(theta, nx, ny, nz);
        CHECK(oracle::max_abs_diff(closed, dense) <= 1e-13);
        CHECK(fdqpt::unitarity_defect(fdqpt::pauli_exp_axis(theta, nx, ny, nz)) <= 1e-14);
    }
    CHECK(oracle::max_abs_diff(oracle::from_pauli(fdqpt::pauli_exp_x(1.3)),
                               oracle::rotation(1.3, 1.0, 0.0, 0.0)) <= 1e-14);
    CHECK(oracle::max_abs_diff(oracle::from_pauli(fdqpt::pauli_exp_y(-2.4)),
                               oracle::rotation(-2.4, 0.0, 1.0, 0.0)) <= 1e-14);
}

// ---- one-period propagator ------------------------------------------------------

TEST_CASE("floquet operator matches the dense product of half-period factors") {
    for (double jy_pi : {1.1, 2.1, 4.1}) {
        const auto p = fdqpt::make_pql(0.5 * k_pi, jy_pi * k_pi);
        for (double k : fdqpt::brillouin_k_grid(31)) {
            const pauli_operator u = fdqpt::floquet_operator(p, k);
            const double hx = p.h_x(k), hy = p.h_y(k);

            // coefficient closed form
            CHECK(std::abs(u.c0 - cplx(std::cos(hx) * std::cos(hy))) <= 1e-14);
            CHECK(std::abs(u.cx + imag_unit * std::sin(hx) * std::cos(hy)) <= 1e-14);
            CHECK(std::abs(u.cy + imag_unit * std::sin(hy) * std::cos(hx)) <= 1e-14);
            CHECK(std::abs(u.cz - imag_unit * std::sin(hx) * std::sin(hy)) <= 1e-14);

            const auto dense =
                oracle::rotation(hy, 0.0, 1.0, 0.0) * oracle::rotation(hx, 1.0, 0.0, 0.0);
            CHECK(oracle::max_abs_diff(oracle::from_pauli(u), dense) <= 1e-13);
            CHECK(fdqpt::unitarity_defect(u) <= 1e-14);
        }
    }
}

// ---- spectrum --------------------------------------------------------------------

TEST_CASE("spectrum satisfies the eigen-relation and unit-vector invariants") {
    for (double jy_pi : {1.1, 0.9}) {
        const auto p = fdqpt::make_pql((jy_pi == 0.9 ? 0.9 : 0.5) * k_pi, jy_pi * k_pi);
        for (double k : fdqpt::brillouin_k_grid(101)) {
            const auto s = fdqpt::spectrum_at(p, k);
            REQUIRE(!s.gapless);
            CHECK(s.e >= 0.0);
            CHECK(s.e <= k_pi);

            const double nn = s.n[0] * s.n[0] + s.n[1] * s.n[1] + s.n[2] * s.n[2];
            CHECK(std::abs(nn - 1.0) <= 1e-12);
            for (int j = 0; j < 3; ++j) CHECK(std::abs(s.d[j] - s.e * s.n[j]) <= 1e-12);

            // eigenphase against the propagator trace
            const pauli_operator u = fdqpt::floquet_operator(p, k);
            CHECK(std::abs(std::cos(s.e) - u.c0.real()) <= 1e-12);

            // U psi_v = exp(-i v e) psi_v for both bands, in any gauge
            for (int v : {+1, -1}) {
                const auto& psi = v > 0 ? s.psi_plus : s.psi_minus;
                const auto im = u.apply(psi);
                const cplx lambda = std::polar(1.0, -v * s.e);
                CHECK(state_distance(im, fdqpt::scaled(psi, lambda)) <= 1e-10);
                CHECK(std::abs(fdqpt::norm(psi) - 1.0) <= 1e-12);
            }
            CHECK(std::abs(fdqpt::inner(s.psi_plus, s.psi_minus)) <= 1e-12);
        }
    }
}

TEST_CASE("eigenvector gauge patch covers an axis aligned with z") {
    // Constant quench angles -pi/2, +pi/2 give n = (0, 0, +1), so the
    // positive band hits the degenerate corner of the primary gauge column.
    const auto p = fdqpt::make_custom(
        "z-axis", [](double) { return -0.5 * k_pi; }, [](double) { return 0.5 * k_pi; },
        fdqpt::protocol_symmetries{});
    const auto s = fdqpt::spectrum_at(p, 0.3);
    REQUIRE(!s.gapless);
    CHECK(s.n[2] == doctest::Approx(1.0));

    const pauli_operator u = fdqpt::floquet_operator(p, 0.3);
    for (int v : {+1, -1}) {
        const auto& psi = v > 0 ? s.psi_plus : s.psi_minus;
        const auto im = u.apply(psi);
        const cplx lambda = std::polar(1.0, -v * s.e);
        CHECK(state_distance(im, fdqpt::scaled(psi, lambda)) <= 1e-10);
        CHECK(std::abs(fdqpt::norm(psi) - 1.0) <= 1e-12);
    }
}

TEST_CASE("band touchings are flagged, not rejected") {
    const auto p = fdqpt::make_pql(k_pi, k_pi);

    const auto b0 = fdqpt::band_at(p, 0.0);
    CHECK(b0.gapless);
    CHECK(b0.e == doctest::Approx(k_pi));
    CHECK(b0.nx == 0.0);
    CHECK(b0.ny == 0.0);
    CHECK(b0.nz == 0.0);

    CHECK(fdqpt::band_at(p, 0.5 * k_pi).gapless);
    CHECK(fdqpt::spectrum_at(p, 0.5 * k_pi).gapless);
    CHECK(!fdqpt::band_at(p, 0.25 * k_pi).gapless);
}

// ---- micromotion ------------------------------------------------------------------

TEST_CASE("micromotion operator interpolates the period") {
    const auto p = fdqpt::make_pql(0.5 * k_pi, 1.1 * k_pi);
    const double k = -1.37;

    CHECK(fdqpt::micromotion_operator(p, k, 0.0)
              .max_coefficient_distance(pauli_operator::identity()) <= 1e-15);

    // agreement with dense partial products across both halves
    for (double s : {0.2, 0.5, 0.999, 1.0, 1.3, 1.8, 1.999}) {
        const auto lib = oracle::from_pauli(fdqpt::micromotion_operator(p, k, s));
        const auto dense =
            s < 1.0 ? oracle::rotation(s * p.h_x(k), 1.0, 0.0, 0.0)
                    : oracle::rotation((s - 1.0) * p.h_y(k), 0.0, 1.0, 0.0) *
                          oracle::rotation(p.h_x(k), 1.0, 0.0, 0.0);
        CHECK(oracle::max_abs_diff(lib, dense) <= 1e-13);
        CHECK(fdqpt::unitarity_defect(fdqpt::micromotion_operator(p, k, s)) <= 1e-13);
    }

    // continuity across the switch and toward the period boundary
    const double eps = 1e-12;
    CHECK(fdqpt::micromotion_operator(p, k, 1.0 - eps)
              .max_coefficient_distance(fdqpt::micromotion_operator(p, k, 1.0)) <= 1e-11);
    CHECK(fdqpt::micromotion_operator(p, k, 2.0 - eps)
              .max_coefficient_distance(fdqpt::floquet_operator(p, k)) <= 1e-11);

    CHECK_THROWS_AS(fdqpt::micromotion_operator(p, k, -0.1), fdqpt::domain_error);
    CHECK_THROWS_AS(fdqpt::micromotion_operator(p, k, 2.0), fdqpt::domain_error);
    CHECK_THROWS_AS(fdqpt::micromotion_operator(p, k, 5.0), fdqpt::domain_error);
}

// ---- stroboscopic evolution ---------------------------------------------------------

TEST_CASE("evolved eigenstates follow the dense piecewise propagator") {
    for (double jy_pi : {1.1, 2.1}) {
        const auto p = fdqpt::make_pql(0.5 * k_pi, jy_pi * k_pi);
        for (double k : {-2.3, -0.9, 0.45, 1.8}) {
            const auto sp = fdqpt::spectrum_at(p, k);
            REQUIRE(!sp.gapless);
            for (int v : {+1, -1}) {
                const auto& psi = v > 0 ? sp.psi_plus : sp.psi_minus;
                for (double t : {0.0, 0.3, 1.0, 1.7, 2.0, 3.25, 5.9, -0.5}) {
                    const auto evolved = fdqpt::evolve_eigenstate(p, k, v, t);
                    const auto dense = oracle::apply(oracle::brute_propagator(p, k, t), psi);
                    CHECK(state_distance(evolved, dense) <= 1e-12);
                    CHECK(std::abs(fdqpt::norm(evolved) - 1.0) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("evolution rejects bad band signs and touchings") {
    const auto p = fdqpt::make_pql(k_pi, k_pi);
    CHECK_THROWS_AS(fdqpt::evolve_eigenstate(p, 0.3, 0, 0.5), fdqpt::parameter_error);
    CHECK_THROWS_AS(fdqpt::evolve_eigenstate(p, 0.3, 2, 0.5), fdqpt::parameter_error);
    CHECK_THROWS_AS(fdqpt::evolve_eigenstate(p, 0.0, 1, 0.5), fdqpt::degenerate_band_error);

    try {
        fdqpt::evolve_eigenstate(p, 0.5 * k_pi, -1, 0.5);
        FAIL("expected a degenerate band error");
    } catch (const fdqpt::degenerate_band_error& err) {
        CHECK(err.k == doctest::Approx(0.5 * k_pi));
        CHECK(dynamic_cast<const fdqpt::degeneracy_error*>(&err) != nullptr);
    }
}
